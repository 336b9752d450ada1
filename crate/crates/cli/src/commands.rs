use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use bbz_core::arith::render_rational;
use bbz_core::bbzmult::{self, SeriesCheck};
use bbz_core::io;
use bbz_core::monster::{self, JCoefficients};
use bbz_core::quiver::{self, Quiver};
use bbz_core::schofield::{self, Pairing, SerreRelation, Word};
use bbz_core::{BorcherdsCartanDatum, DegreeBox, Error, ErrorKind, Label, Result, RootVec, Weight};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::{Cli, Command, DatumArgs, Format, MonsterKind, Preset};

pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, pass: true }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Input => 2,
        ErrorKind::Invariant => 3,
        ErrorKind::Cap => 4,
    }
}

fn read(path: &Path) -> Result<String> {
    let read = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    read.map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn parse_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::InvalidInput(format!("'{s}' is not a field order"))))
        .collect()
}

fn alpha_json(alpha: &RootVec, labels: &[Label]) -> Value {
    let map: Map<String, Value> = alpha
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (labels[i].to_string(), json!(c)))
        .collect();
    Value::Object(map)
}

fn labels_json(labels: &[Label]) -> Value {
    json!(labels.iter().map(|l| l.to_string()).collect::<Vec<_>>())
}

fn finish_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialise");
    s.push('\n');
    s
}

/// The Monster window `{−1, 1, …, K}` read off a box description.
fn monster_window(bx: &str) -> Result<i64> {
    let items: Vec<&str> = bx.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.iter().any(|s| s.contains(':')) {
        let mut k = 1;
        for item in items {
            let (l, _) = item.rsplit_once(':').unwrap_or((item, ""));
            match l.trim().parse::<i64>() {
                Ok(-1) => {}
                Ok(v) if v >= 1 => k = k.max(v),
                _ => return Err(Error::UnknownVertex(l.trim().to_string())),
            }
        }
        Ok(k)
    } else {
        Ok((items.len() as i64 - 1).max(1))
    }
}

struct Loaded {
    datum: BorcherdsCartanDatum,
    bx: DegreeBox,
    j: Vec<usize>,
}

fn load(args: &DatumArgs) -> Result<Loaded> {
    let (datum, default_j) = match (&args.preset, &args.input) {
        (Some(Preset::Monster), _) => {
            let k = monster_window(&args.bx)?;
            let coeffs = monster::j_coefficients(k.max(2) as usize)?;
            let datum = monster::monster_datum(k, &coeffs)?;
            let j = vec![datum.position(&Label::Int(-1))?];
            (datum, j)
        }
        (None, Some(path)) => {
            let datum = io::parse_datum(&read(path)?)?;
            let j = datum.real_vertices();
            (datum, j)
        }
        (None, None) => return Err(Error::InvalidInput("either --input or --preset is required".into())),
    };
    let bx = io::parse_box(&args.bx, datum.labels())?;
    let j = match &args.j {
        Some(text) => {
            let j = io::parse_vertex_set(text, datum.labels())?;
            if let Some(&i) = j.iter().find(|&&i| !datum.is_real(i)) {
                return Err(Error::InvalidInput(format!(
                    "J may only contain real vertices; {} is imaginary",
                    datum.label(i)
                )));
            }
            j
        }
        None => default_j,
    };
    Ok(Loaded { datum, bx, j })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Mult(args) => mult(args, fmt),
        Command::DenomCheck { datum, corrupt } => denom_check(datum, corrupt.as_deref(), fmt),
        Command::Character { datum, lambda } => character(datum, lambda, fmt),
        Command::Monster { algebra, m, n, alpha } => monster_cmd(*algebra, *m, *n, alpha.as_deref(), fmt),
        Command::Jcoeffs { n } => jcoeffs(*n, fmt),
        Command::QuiverKac { input, alpha, fields, cap } => quiver_kac(input, alpha, fields, *cap, fmt),
        Command::QuiverRoots { input, bx, fields, cap } => quiver_roots(input, bx, fields, *cap, fmt),
        Command::SchofieldPair { input, module, module_n, word, fields, cap } => {
            schofield_pair(input, module, module_n.as_deref(), word, fields, *cap, fmt)
        }
        Command::SerreCheck { input, relation, fields, cap } => serre_check(input, relation, fields, *cap, fmt),
    }
}

fn mult(args: &DatumArgs, fmt: Format) -> Result<Outcome> {
    let l = load(args)?;
    let table = bbzmult::multiplicity_table(&l.datum, &l.j, &l.bx)?;
    let labels = l.datum.labels();
    Ok(Outcome::ok(match fmt {
        Format::Tsv => {
            let mut s = String::from("alpha\tmult\n");
            for (alpha, m) in table.rows() {
                let _ = writeln!(s, "{alpha}\t{m}");
            }
            s
        }
        Format::Json => finish_json(json!({
            "vertices": labels_json(labels),
            "J": table.j.iter().map(|&i| labels[i].to_string()).collect::<Vec<_>>(),
            "rows": table.rows().into_iter().map(|(a, m)| json!({
                "alpha": alpha_json(a, labels),
                "mult": m.to_string(),
            })).collect::<Vec<_>>(),
        })),
    }))
}

fn check_json(c: &SeriesCheck, labels: &[Label]) -> Value {
    match &c.first_discrepancy {
        None => json!({"pass": true}),
        Some((k, l, r)) => json!({
            "pass": false,
            "at": alpha_json(k, labels),
            "lhs": render_rational(l),
            "rhs": render_rational(r),
        }),
    }
}

fn check_tsv(name: &str, c: &SeriesCheck) -> String {
    match &c.first_discrepancy {
        None => format!("{name}\tpass\t\n"),
        Some((k, l, r)) => format!(
            "{name}\tfail\t{k}: lhs {} rhs {}\n",
            render_rational(l),
            render_rational(r)
        ),
    }
}

fn denom_check(args: &DatumArgs, corrupt: Option<&str>, fmt: Format) -> Result<Outcome> {
    let l = load(args)?;
    let mut table = bbzmult::multiplicity_table(&l.datum, &l.j, &l.bx)?;
    if let Some(text) = corrupt {
        let target = io::parse_box(text, l.datum.labels())?;
        let alpha = RootVec::new(target.limits().to_vec());
        let slot = table
            .mults
            .get_mut(&alpha)
            .ok_or_else(|| Error::InvalidInput(format!("{alpha} is not in the box")))?;
        *slot += 1;
    }
    let report = bbzmult::check_denominator_with(&l.datum, &table)?;
    let labels = l.datum.labels();
    let text = match fmt {
        Format::Tsv => {
            let mut s = String::from("identity\tverdict\tfirst_discrepancy\n");
            s += &check_tsv("twisted", &report.twisted);
            s += &check_tsv("full", &report.full);
            s
        }
        Format::Json => finish_json(json!({
            "J": table.j.iter().map(|&i| labels[i].to_string()).collect::<Vec<_>>(),
            "twisted": check_json(&report.twisted, labels),
            "full": check_json(&report.full, labels),
            "pass": report.pass(),
        })),
    };
    Ok(Outcome {
        text,
        pass: report.pass(),
    })
}

fn character(args: &DatumArgs, lambda: &str, fmt: Format) -> Result<Outcome> {
    let l = load(args)?;
    let pairings = io::parse_labelled_ints(lambda, l.datum.labels())?;
    let ch = bbzmult::bbz_character(&l.datum, &Weight::custom(pairings), &l.bx)?;
    let labels = l.datum.labels();
    Ok(Outcome::ok(match fmt {
        Format::Tsv => {
            let mut s = String::from("depth\tcoeff\n");
            for (k, v) in ch.sorted_terms() {
                let _ = writeln!(s, "{k}\t{}", render_rational(v));
            }
            s
        }
        Format::Json => finish_json(ch.to_json(labels)),
    }))
}

fn coefficients_for(top: i64) -> Result<JCoefficients> {
    monster::j_coefficients(top.max(2) as usize)
}

fn monster_cmd(kind: MonsterKind, m: Option<u32>, n: Option<u32>, alpha: Option<&str>, fmt: Format) -> Result<Outcome> {
    if kind == MonsterKind::Root {
        let text = alpha.ok_or_else(|| Error::InvalidInput("root mode needs --alpha".into()))?;
        let mut root = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (v, c) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("cannot read '{item}'")))?;
            let v: i64 = v.trim().parse().map_err(|_| Error::UnknownVertex(v.trim().to_string()))?;
            let c: u32 = c.trim().parse().map_err(|_| Error::InvalidInput(format!("cannot read '{item}'")))?;
            root.push((v, c));
        }
        if root.iter().all(|(_, c)| *c == 0) {
            return Err(Error::InvalidInput("alpha must be nonzero".into()));
        }
        let top = root.iter().map(|(v, _)| *v).max().unwrap_or(1);
        let coeffs = coefficients_for(top)?;
        let dim = monster::monster_bozec_root_mult(&root, &coeffs)?;
        let rendered = root
            .iter()
            .map(|(v, c)| format!("{v}:{c}"))
            .collect::<Vec<_>>()
            .join(",");
        return Ok(Outcome::ok(match fmt {
            Format::Tsv => format!("alpha\tdim\n{rendered}\t{dim}\n"),
            Format::Json => finish_json(json!({"alpha": rendered, "dim": dim.to_string()})),
        }));
    }
    let (m, n) = match (m, n) {
        (Some(m), Some(n)) if m > 0 && n > 0 => (m, n),
        _ => return Err(Error::InvalidInput("--m and --n must be positive".into())),
    };
    let coeffs = coefficients_for((m + n) as i64)?;
    let dim: BigInt = match kind {
        MonsterKind::Lie => monster::monster_lie_mult(m, n, &coeffs)?,
        _ => monster::monster_bozec_mult(m, n, &coeffs)?,
    };
    Ok(Outcome::ok(match fmt {
        Format::Tsv => format!("m\tn\tdim\n{m}\t{n}\t{dim}\n"),
        Format::Json => finish_json(json!({"m": m, "n": n, "dim": dim.to_string()})),
    }))
}

fn jcoeffs(n: usize, fmt: Format) -> Result<Outcome> {
    let coeffs = monster::j_coefficients(n.max(2))?;
    let rows: Vec<(i64, BigInt)> = (-1..=n as i64).map(|k| (k, coeffs.c(k))).collect();
    Ok(Outcome::ok(match fmt {
        Format::Tsv => {
            let mut s = String::from("n\tc\n");
            for (k, c) in rows {
                let _ = writeln!(s, "{k}\t{c}");
            }
            s
        }
        Format::Json => finish_json(json!(rows
            .into_iter()
            .map(|(k, c)| json!({"n": k, "c": c.to_string()}))
            .collect::<Vec<_>>())),
    }))
}

fn load_quiver(path: &Path) -> Result<Arc<Quiver>> {
    Ok(Arc::new(io::parse_quiver(&read(path)?)?))
}

fn dimension_vector(text: &str, q: &Quiver) -> Result<Vec<u32>> {
    let values = io::parse_labelled_ints(text, q.labels())?;
    values
        .into_iter()
        .map(|v| u32::try_from(v).map_err(|_| Error::InvalidInput(format!("dimension {v} is negative"))))
        .collect()
}

fn quiver_kac(input: &Path, alpha: &str, fields: &str, cap: u64, fmt: Format) -> Result<Outcome> {
    let q = load_quiver(input)?;
    let alpha = dimension_vector(alpha, &q)?;
    let r = quiver::kac_polynomial_1nil(&q, &alpha, &parse_list(fields)?, cap)?;
    Ok(Outcome::ok(match fmt {
        Format::Tsv => {
            let mut s = String::from("q\tcount\n");
            for (f, c) in &r.counts {
                let _ = writeln!(s, "{f}\t{c}");
            }
            let _ = writeln!(s, "# polynomial\t{}", r.polynomial);
            let _ = writeln!(s, "# constant\t{}", r.polynomial.constant());
            let _ = writeln!(
                s,
                "# degree\t{} (bound {}{})",
                r.fitted_degree,
                r.degree_bound,
                if r.clamped { ", clamped by sample count" } else { "" }
            );
            s
        }
        Format::Json => finish_json(json!({
            "alpha": r.alpha,
            "counts": r.counts.iter().map(|(f, c)| json!({"q": f, "count": c.to_string()})).collect::<Vec<_>>(),
            "coefficients": r.polynomial.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "constant": r.polynomial.constant().to_string(),
            "degree_bound": r.degree_bound,
            "fitted_degree": r.fitted_degree,
            "clamped": r.clamped,
        })),
    }))
}

fn quiver_roots(input: &Path, bx: &str, fields: &str, cap: u64, fmt: Format) -> Result<Outcome> {
    let q = load_quiver(input)?;
    let bx = io::parse_box(bx, q.labels())?;
    let r = quiver::check_root_correspondence(&q, &bx, &parse_list(fields)?, cap)?;
    let labels = q.labels();
    let text = match fmt {
        Format::Tsv => {
            let mut s = String::from("alpha\tmult\tkac_constant\tpolynomial\tagree\n");
            for row in &r.rows {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}",
                    row.alpha, row.multiplicity, row.kac_constant, row.polynomial, row.agree
                );
            }
            let _ = writeln!(s, "# root sets agree\t{}", r.roots_from_algebra == r.roots_from_quiver);
            s
        }
        Format::Json => finish_json(json!({
            "rows": r.rows.iter().map(|row| json!({
                "alpha": alpha_json(&row.alpha, labels),
                "mult": row.multiplicity.to_string(),
                "kac_constant": row.kac_constant.to_string(),
                "polynomial": row.polynomial,
                "clamped": row.clamped,
                "agree": row.agree,
            })).collect::<Vec<_>>(),
            "roots_from_algebra": r.roots_from_algebra.iter().map(|a| alpha_json(a, labels)).collect::<Vec<_>>(),
            "roots_from_quiver": r.roots_from_quiver.iter().map(|a| alpha_json(a, labels)).collect::<Vec<_>>(),
            "pass": r.pass(),
        })),
    };
    Ok(Outcome { text, pass: r.pass() })
}

fn schofield_pair(
    input: &Path,
    module: &Path,
    module_n: Option<&Path>,
    word: &str,
    fields: &str,
    cap: u64,
    fmt: Format,
) -> Result<Outcome> {
    let q = load_quiver(input)?;
    let m = io::parse_module(&read(module)?, &q)?;
    let w = Word::parse(&q, word)?;
    let mut ctx = Pairing::new(q.clone(), parse_list(fields)?);
    ctx.cap = cap;
    let report = match module_n {
        Some(path) => {
            let n = io::parse_module(&read(path)?, &q)?;
            ctx.word_pair(&w, &m, &n)?
        }
        None if w.has_primes() => {
            return Err(Error::InvalidInput("primed letters need --module-n".into()));
        }
        None => ctx.word(&w, &m)?,
    };
    Ok(Outcome::ok(match fmt {
        Format::Tsv => {
            let mut s = String::from("q\tcount\n");
            for (f, c) in &report.counts {
                let _ = writeln!(s, "{f}\t{c}");
            }
            let _ = writeln!(s, "# polynomial\t{}", report.polynomial);
            let _ = writeln!(s, "# chi\t{}", report.chi);
            s
        }
        Format::Json => finish_json(json!({
            "word": w.render(&q),
            "counts": report.counts.iter().map(|(f, c)| json!({"q": f, "count": c.to_string()})).collect::<Vec<_>>(),
            "coefficients": report.polynomial.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "chi": report.chi.to_string(),
        })),
    }))
}

fn parse_relation(text: &str, q: &Quiver) -> Result<SerreRelation> {
    let bad = || Error::InvalidInput(format!("cannot read relation '{text}'"));
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    let vertex = |s: &str| q.position_of(s);
    let level = |s: &str| s.parse::<u32>().map_err(|_| bad());
    match (kind.trim(), parts.as_slice()) {
        ("ad", [i, j]) => Ok(SerreRelation::AdPower { i: vertex(i)?, j: vertex(j)?, l: 1 }),
        ("ad", [i, j, l]) => Ok(SerreRelation::AdPower { i: vertex(i)?, j: vertex(j)?, l: level(l)? }),
        ("commute", [i, k, j, l]) => Ok(SerreRelation::Commute {
            i: vertex(i)?,
            k: level(k)?,
            j: vertex(j)?,
            l: level(l)?,
        }),
        _ => Err(bad()),
    }
}

fn serre_check(input: &Path, relation: &str, fields: &str, cap: u64, fmt: Format) -> Result<Outcome> {
    let q = load_quiver(input)?;
    let rel = parse_relation(relation, &q)?;
    let r = schofield::check_serre(&q, rel, &parse_list(fields)?, cap)?;
    let element: Vec<String> = r.element.iter().map(|(w, c)| format!("{c} {}", w.render(&q))).collect();
    let text = match fmt {
        Format::Tsv => {
            let mut s = String::from("p\tmodule\tpairing\n");
            for (p, m, v) in &r.rows {
                let _ = writeln!(s, "{p}\t{}\t{v}", serde_json::to_string(m).expect("module serialises"));
            }
            let _ = writeln!(s, "# element\t{}", element.join(" + "));
            let _ = writeln!(s, "# vanishes\t{}", r.pass());
            s
        }
        Format::Json => finish_json(json!({
            "element": element,
            "degree": r.degree,
            "rows": r.rows.iter().map(|(p, m, v)| json!({"p": p, "module": m, "pairing": v.to_string()})).collect::<Vec<_>>(),
            "pass": r.pass(),
            "scope": "necessary condition: vanishing on every module of this degree over the listed prime fields",
        })),
    };
    Ok(Outcome { text, pass: r.pass() })
}
