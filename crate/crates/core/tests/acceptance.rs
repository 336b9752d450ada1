//! Acceptance run: one PASS/FAIL line per criterion, with the elapsed time
//! against its budget. Runs without the libtest harness so the lines show up
//! in `cargo test` output.
//!
//! Three published statements are false as printed. Their lines read FAIL and
//! carry a `known defect` note; the run then asserts that the discrepancy is
//! exactly the pinned one and prints a PASS line for the corrected statement.
//! The process exits nonzero only when something else fails or a pinned
//! discrepancy changes.

mod support;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use bbz_core::arith;
use bbz_core::bbzmult::{self, witt};
use bbz_core::monster::{self, JCoefficients};
use bbz_core::quiver::{check_root_correspondence, kac_polynomial_1nil, Quiver};
use bbz_core::schofield::{
    check_lemma_product, check_lemma_sum, check_lemma_sum_split, check_serre, IntModule, Letter,
    Pairing, SerreRelation, Word,
};
use bbz_core::{BorcherdsCartanDatum, DegreeBox, Label, RootVec, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

#[derive(Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    /// A printed statement that is false; `true` when the observed
    /// discrepancy matches the pinned one.
    KnownDefect(bool),
}

struct Line {
    tag: String,
    status: Status,
    text: String,
}

fn line(tag: &str, ok: bool, text: impl Into<String>) -> Line {
    Line {
        tag: tag.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        text: text.into(),
    }
}

type Outcome = Result<Vec<Line>, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn r(v: &[u32]) -> RootVec {
    RootVec::new(v.to_vec())
}

fn datum(matrix: Vec<Vec<i64>>) -> BorcherdsCartanDatum {
    let labels = (0..matrix.len() as i64).map(Label::Int).collect();
    BorcherdsCartanDatum::new(labels, matrix, None, None).expect("valid datum")
}

/// Partition numbers by the usual coin-change recurrence.
fn partition_numbers(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for k in part..=n {
            p[k] += p[k - part];
        }
    }
    p
}

/// Multiplicity vectors `s` of the partitions of `n`; `s[k]` counts part `k`.
fn partitions(n: usize) -> Vec<Vec<u64>> {
    fn rec(rest: usize, max: usize, s: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(s.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            s[part] += 1;
            rec(rest - part, part, s, out);
            s[part] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut vec![0; n + 1], &mut out);
    out
}

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn c1_rank_one_isotropic() -> Outcome {
    let iso = datum(vec![vec![0]]);
    let bx = DegreeBox::new(vec![12]);
    let vm = bbzmult::virtual_module(&iso, &[], &bx).map_err(err)?;
    let w4 = witt(&vm, &r(&[4]));
    let w2 = witt(&vm, &r(&[2]));
    let table = bbzmult::multiplicity_table(&iso, &[], &bx).map_err(err)?;
    let bad: Vec<String> = (1..=12)
        .filter(|&n| !table.get(&r(&[n])).is_one())
        .map(|n| format!("g({n})={}", table.get(&r(&[n]))))
        .collect();
    let ok = w4 == rat(7, 4) && w2 == rat(3, 2) && bad.is_empty();
    Ok(vec![line(
        "1",
        ok,
        format!("rank-1 isotropic: W(4)={w4}, W(2)={w2}, dim g(n)=1 for n<=12 {}", if bad.is_empty() { "holds".into() } else { bad.join(" ") }),
    )])
}

fn c2_rank_one_nonisotropic() -> Outcome {
    let non = datum(vec![vec![-2]]);
    let bx = DegreeBox::new(vec![12]);
    let vm = bbzmult::virtual_module(&non, &[], &bx).map_err(err)?;
    let w4 = witt(&vm, &r(&[4]));
    let table = bbzmult::multiplicity_table(&non, &[], &bx).map_err(err)?;
    let mut bad = Vec::new();
    if !table.get(&r(&[1])).is_one() {
        bad.push(format!("g(1)={}", table.get(&r(&[1]))));
    }
    for n in 2..=12u32 {
        // necklaces by direct Möbius sum, independent of the library helper
        let mut s = BigInt::zero();
        for d in 1..=n {
            if n % d == 0 {
                s += BigInt::from(arith::mobius(d as u64)) * BigInt::from(2u64).pow(n / d);
            }
        }
        let necklace = s / BigInt::from(n);
        if table.get(&r(&[n])) != necklace {
            bad.push(format!("g({n})={} vs N(2,{n})={necklace}", table.get(&r(&[n]))));
        }
    }
    let dim4 = table.get(&r(&[4]));
    let ok = w4 == rat(15, 4) && dim4 == BigInt::from(3) && bad.is_empty();
    let mut out = vec![line(
        "2a",
        ok,
        format!("rank-1 non-isotropic: W(4)={w4}, dim g(4)={dim4}, dim g(n)=N(2,n) for 2<=n<=12, g(1)=1 {}", if bad.is_empty() { "holds".into() } else { bad.join(" ") }),
    )];

    // Σ_{d|n} μ(d)/d Σ_{s ∈ P(n/d)} (|s|−1)!/s!  =  (1/n) Σ_{d|n} μ(d) 2^{n/d}
    let mut bad = Vec::new();
    for n in 1..=12u64 {
        let mut lhs = BigRational::zero();
        for d in arith::divisors(n) {
            let mu = arith::mobius(d);
            if mu == 0 {
                continue;
            }
            let mut inner = BigRational::zero();
            for s in partitions((n / d) as usize) {
                let total: u64 = s.iter().sum();
                let denom: BigInt = s.iter().map(|&k| factorial(k)).product();
                inner += BigRational::new(factorial(total - 1), denom);
            }
            lhs += inner * rat(mu, d as i64);
        }
        let mut rhs = BigInt::zero();
        for d in arith::divisors(n) {
            rhs += BigInt::from(arith::mobius(d)) * BigInt::from(2u64).pow((n / d) as u32);
        }
        let rhs = BigRational::new(rhs, n.into());
        if lhs != rhs {
            bad.push((n, lhs, rhs));
        }
    }
    // The left side is dim g(n), which is 1 rather than N(2,1) = 2 at n = 1.
    let pinned = bad.len() == 1 && bad[0] == (1, rat(1, 1), rat(2, 1));
    let show = |b: &[(u64, BigRational, BigRational)]| {
        b.iter().map(|(n, l, r)| format!("n={n}: {l} vs {r}")).collect::<Vec<_>>().join("; ")
    };
    out.push(Line {
        tag: "2b".into(),
        status: if bad.is_empty() { Status::Pass } else { Status::KnownDefect(pinned) },
        text: if bad.is_empty() {
            "partition identity for 1<=n<=12 holds".into()
        } else {
            format!(
                "partition identity for 1<=n<=12 fails at {} (known defect: the identity restates dim g(n) = N(2,n), which needs n>=2)",
                show(&bad)
            )
        },
    });
    let rest: Vec<_> = bad.iter().filter(|b| b.0 >= 2).cloned().collect();
    out.push(line(
        "2b'",
        rest.is_empty(),
        format!("partition identity for 2<=n<=12 {}", if rest.is_empty() { "holds".into() } else { show(&rest) }),
    ));
    Ok(out)
}

fn c3_rank_two_examples() -> Outcome {
    let bx = DegreeBox::new(vec![4, 4]);
    let a = datum(vec![vec![2, -2], vec![-2, -2]]);
    let vm = bbzmult::virtual_module(&a, &[0], &bx).map_err(err)?;
    let (w44, w22) = (witt(&vm, &r(&[4, 4])), witt(&vm, &r(&[2, 2])));
    let m = bbzmult::root_multiplicity(&a, &[0], &r(&[4, 4]), &bx).map_err(err)?;
    let b = datum(vec![vec![2, -2], vec![-2, 0]]);
    let vm = bbzmult::virtual_module(&b, &[0], &bx).map_err(err)?;
    let w44b = witt(&vm, &r(&[4, 4]));
    let mb = bbzmult::root_multiplicity(&b, &[0], &r(&[4, 4]), &bx).map_err(err)?;
    Ok(vec![
        line(
            "3a",
            w44 == rat(81, 4) && w22 == rat(5, 2) && m == BigInt::from(19),
            format!("a=2, non-isotropic: W(4,4)={w44}, W(2,2)={w22}, dim g(4,4)={m}"),
        ),
        line(
            "3b",
            w44b == rat(65, 4) && mb == BigInt::from(15),
            format!("a=2, isotropic: W(4,4)={w44b}, dim g(4,4)={mb}"),
        ),
    ])
}

fn c4_twisted_denominator() -> Outcome {
    let d = datum(vec![vec![2, -2], vec![-2, -2]]);
    let bx = DegreeBox::new(vec![6, 6]);
    let with_j = bbzmult::verify_denominator(&d, &[0], &bx).map_err(err)?;
    let without = bbzmult::verify_denominator(&d, &[], &bx).map_err(err)?;
    let same = with_j.table.mults == without.table.mults;
    let describe = |rep: &bbzmult::DenominatorReport| match &rep.twisted.first_discrepancy {
        None => "twisted ok".to_string(),
        Some((k, a, b)) => format!("twisted differs at {k}: {a} vs {b}"),
    };
    Ok(vec![line(
        "4",
        with_j.twisted.pass && without.twisted.pass && same,
        format!(
            "box (6,6): J={{0}} {}, J=empty {}, tables {}",
            describe(&with_j),
            describe(&without),
            if same { "agree" } else { "differ" }
        ),
    )])
}

fn c5_characters() -> Outcome {
    let bx = DegreeBox::new(vec![10]);
    let p = partition_numbers(10);
    let iso = bbzmult::bbz_character(&datum(vec![vec![0]]), &Weight::custom(vec![1]), &bx).map_err(err)?;
    let non = bbzmult::bbz_character(&datum(vec![vec![-2]]), &Weight::custom(vec![1]), &bx).map_err(err)?;
    let mut bad = Vec::new();
    for n in 0..=10u32 {
        let want_iso = BigRational::from_integer(p[n as usize].into());
        let want_non = BigRational::from_integer(if n == 0 { BigInt::one() } else { BigInt::from(2u64).pow(n - 1) });
        if iso.coeff(&r(&[n])) != want_iso {
            bad.push(format!("iso n={n}: {}", iso.coeff(&r(&[n]))));
        }
        if non.coeff(&r(&[n])) != want_non {
            bad.push(format!("non-iso n={n}: {}", non.coeff(&r(&[n]))));
        }
    }
    Ok(vec![line(
        "5",
        bad.is_empty(),
        format!("rank-1 characters for n<=10: p(n) and 1,1,2,4,8,... {}", if bad.is_empty() { "hold".into() } else { bad.join(" ") }),
    )])
}

fn c6_j_coefficients() -> Outcome {
    let c = monster::j_coefficients(64).map_err(err)?;
    let ok = c.c(1) == BigInt::from(196884)
        && c.c(2) == BigInt::from(21493760)
        && c.c(0).is_zero()
        && c.c(-1).is_one();
    Ok(vec![line(
        "6",
        ok,
        format!("j with N=64: c(-1)={}, c(0)={}, c(1)={}, c(2)={}", c.c(-1), c.c(0), c.c(1), c.c(2)),
    )])
}

fn c7_monster_lie() -> Outcome {
    let c = monster::j_coefficients(13).map_err(err)?;
    let mut bad = Vec::new();
    let mut count = 0;
    for m in 1..=12u32 {
        for n in m..=12 {
            if m * n > 12 {
                continue;
            }
            count += 1;
            let got = monster::monster_lie_mult(m, n, &c).map_err(err)?;
            if got != c.c((m * n) as i64) {
                bad.push(format!("({m},{n}): {got}"));
            }
        }
    }
    Ok(vec![line(
        "7",
        bad.is_empty(),
        format!("dim L(m,n) = c(mn) on {count} pairs with m<=n, mn<=12 {}", if bad.is_empty() { "holds".into() } else { bad.join(" ") }),
    )])
}

/// `c1^e1 c2^e2` as a big integer.
fn mono(c: &JCoefficients, e1: u32, e2: u32) -> BigInt {
    c.c(1).pow(e1) * c.c(2).pow(e2)
}

fn c8_monster_bozec() -> Outcome {
    let c = monster::j_coefficients(20).map_err(err)?;
    let mut out = Vec::new();

    // dim 𝓛_(4,2): graded Möbius route, displayed expression, c(8)+c(2),
    // and the root-graded generic pipeline summed over the grade.
    let graded = monster::monster_bozec_mult(4, 2, &c).map_err(err)?;
    let twice: BigInt = 2 * c.c(5) + 2 * c.c(3) * c.c(1) + c.c(2) * c.c(2) + c.c(2);
    let displayed = if twice.clone() % 2 == BigInt::zero() { Some(twice / 2) } else { None };
    let simple = c.c(8) + c.c(2);
    let mut pipeline = BigInt::zero();
    for alpha in monster::roots_over_grade(4, 2) {
        pipeline += monster::monster_bozec_root_mult(&alpha, &c).map_err(err)?;
    }
    let ok = displayed.as_ref() == Some(&graded) && graded == simple && pipeline == graded;
    out.push(line(
        "8a",
        ok,
        format!(
            "dim L(4,2): graded {graded}, c5+c3c1+c2^2/2+c2/2 {}, c8+c2 {simple}, root-graded sum {pipeline}",
            displayed.map(|d| d.to_string()).unwrap_or_else(|| "not integral".into())
        ),
    ));

    // α = 2α₂ + 4α₁ + 2α₋₁ through the root-graded pipeline with J = {−1}.
    let got = monster::monster_bozec_root_mult(&[(2, 2), (1, 4), (-1, 2)], &c).map_err(err)?;
    // 2 × (5/2 c1⁴c2² + c1⁴c2 + 6c1³c2² + 3/2 c1²c2² + 1/2 c1²c2 − 1/2 c1c2)
    let printed2: BigInt = 5 * mono(&c, 4, 2) + 2 * mono(&c, 4, 1) + 12 * mono(&c, 3, 2) + 3 * mono(&c, 2, 2)
        + mono(&c, 2, 1)
        - mono(&c, 1, 1);
    // the terms missing from the printed expression
    let missing: BigInt = 3 * mono(&c, 3, 1) + 3 * mono(&c, 2, 2) + 2 * mono(&c, 2, 1) + mono(&c, 1, 2) + mono(&c, 1, 1);
    let diff2: BigInt = 2 * got.clone() - printed2.clone();
    out.push(Line {
        tag: "8b".into(),
        status: if diff2.is_zero() {
            Status::Pass
        } else {
            Status::KnownDefect(diff2 == 2 * missing.clone())
        },
        text: if diff2.is_zero() {
            "alpha=2a2+4a1+2a-1 matches the printed expression".into()
        } else {
            format!(
                "alpha=2a2+4a1+2a-1: pipeline {got} vs printed expression {}; the difference is {}3c1^3c2+3c1^2c2^2+2c1^2c2+c1c2^2+c1c2 \
                 (known defect: the printed Witt sum omits the partitions with parts 4a1 and 3a1)",
                BigRational::new(printed2.clone(), 2.into()),
                if diff2 == 2 * missing.clone() { "exactly " } else { "NOT " }
            )
        },
    });
    let completed2: BigInt = printed2 + 2 * missing;
    let mut grading = Vec::new();
    for (m, n) in [(2u32, 1u32), (2, 2), (3, 2), (4, 2), (3, 3)] {
        let mut sum = BigInt::zero();
        for alpha in monster::roots_over_grade(m, n) {
            sum += monster::monster_bozec_root_mult(&alpha, &c).map_err(err)?;
        }
        if sum != monster::monster_bozec_mult(m, n, &c).map_err(err)? {
            grading.push(format!("({m},{n})"));
        }
    }
    out.push(line(
        "8b'",
        2 * got == completed2 && grading.is_empty(),
        format!(
            "alpha=2a2+4a1+2a-1 matches the completed Witt sum; root-graded sums match the (m,n) grading {}",
            if grading.is_empty() { "on (2,1),(2,2),(3,2),(4,2),(3,3)".into() } else { format!("except at {}", grading.join(",")) }
        ),
    ));
    Ok(out)
}

fn quiver(n: usize, arrows: &[(usize, usize)]) -> Arc<Quiver> {
    Arc::new(Quiver::new((1..=n as i64).map(Label::Int).collect(), arrows.to_vec()).expect("valid quiver"))
}

const SAMPLES: [u32; 4] = [2, 3, 4, 5];
const CAP: u64 = 1 << 24;

fn c9_quiver() -> Outcome {
    let mut out = Vec::new();
    let jordan = quiver(1, &[(0, 0)]);
    let rep = check_root_correspondence(&jordan, &DegreeBox::new(vec![3]), &SAMPLES, CAP).map_err(err)?;
    let ok = rep.pass() && rep.rows.iter().all(|row| row.kac_constant.is_one() && row.multiplicity.is_one());
    let detail: Vec<String> = rep
        .rows
        .iter()
        .map(|row| format!("k={}: A(0)={} dim g={}", row.alpha.get(0), row.kac_constant, row.multiplicity))
        .collect();
    out.push(line("9a", ok, format!("Jordan quiver {}", detail.join(", "))));

    let two_loop = quiver(1, &[(0, 0), (0, 0)]);
    let kac = kac_polynomial_1nil(&two_loop, &[2], &SAMPLES, CAP).map_err(err)?;
    let table = bbzmult::multiplicity_table(&two_loop.cartan().map_err(err)?, &[], &DegreeBox::new(vec![2])).map_err(err)?;
    let g2 = table.get(&r(&[2]));
    let necklace = (BigInt::from(4) - BigInt::from(2)) / BigInt::from(2);
    out.push(line(
        "9b",
        kac.polynomial.constant().is_one() && necklace.is_one() && g2.is_one(),
        format!(
            "two-loop quiver dim 2: A(q)={} (fitted degree {} of bound {}), A(0)={}, N(2,2)={necklace}, dim g(2)={g2}",
            kac.polynomial,
            kac.fitted_degree,
            kac.degree_bound,
            kac.polynomial.constant()
        ),
    ));

    let a2 = quiver(2, &[(0, 1)]);
    let rep = check_root_correspondence(&a2, &DegreeBox::new(vec![1, 1]), &SAMPLES, CAP).map_err(err)?;
    let show = |v: &[RootVec]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    out.push(line(
        "9c",
        rep.pass(),
        format!(
            "A2 box (1,1): roots from the algebra {{{}}}, from the quiver {{{}}}",
            show(&rep.roots_from_algebra),
            show(&rep.roots_from_quiver)
        ),
    ));
    Ok(out)
}

/// Isomorphism classes used for the flag lemmas: nilpotent Jordan forms on
/// the Jordan quiver and rank normal forms on A₂, all with total dim ≤ 3.
fn module_family(q: &Quiver) -> Vec<IntModule> {
    let mut out = Vec::new();
    if q.rank() == 1 {
        for n in 0..=3usize {
            for s in partitions(n) {
                let mut blocks = Vec::new();
                for (size, &count) in s.iter().enumerate() {
                    for _ in 0..count {
                        blocks.push(size);
                    }
                }
                let mut x = vec![vec![0i64; n]; n];
                let mut start = 0;
                for b in blocks {
                    for k in 1..b {
                        x[start + k - 1][start + k] = 1;
                    }
                    start += b;
                }
                out.push(IntModule { dims: vec![n], maps: vec![x] });
            }
        }
    } else {
        for a in 0..=3usize {
            for b in 0..=3 - a {
                for rank in 0..=a.min(b) {
                    let mut x = vec![vec![0i64; a]; b];
                    for k in 0..rank {
                        x[k][k] = 1;
                    }
                    out.push(IntModule { dims: vec![a, b], maps: vec![x] });
                }
            }
        }
    }
    out
}

/// Unprimed words of the given degree; `l > 1` only at vertices with loops.
fn words_of_degree(q: &Quiver, degree: &[u32]) -> Vec<Word> {
    fn rec(q: &Quiver, rest: &mut Vec<u32>, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if rest.iter().all(|&x| x == 0) {
            out.push(Word(cur.clone()));
            return;
        }
        for i in 0..rest.len() {
            let top = if q.loops(i) > 0 { rest[i] } else { rest[i].min(1) };
            for l in 1..=top {
                rest[i] -= l;
                cur.push(Letter::new(i, l));
                rec(q, rest, cur, out);
                cur.pop();
                rest[i] += l;
            }
        }
    }
    let mut out = Vec::new();
    rec(q, &mut degree.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Every priming of every letter.
fn primings(w: &Word) -> Vec<Word> {
    let n = w.len();
    (0..1u32 << n)
        .map(|mask| {
            Word(
                w.letters()
                    .iter()
                    .enumerate()
                    .map(|(k, &x)| if mask >> k & 1 == 1 { x.primed() } else { x })
                    .collect(),
            )
        })
        .collect()
}

fn c10_schofield() -> Outcome {
    let mut out = Vec::new();
    let mut product_cases = 0;
    let mut product_bad = Vec::new();
    let mut sum_cases = 0;
    let mut sum_bad: Vec<String> = Vec::new();
    let mut sum_bad_plain = Vec::new();
    let mut split_bad = Vec::new();
    let mut all_failures_have_higher_letters = true;
    for q in [quiver(1, &[(0, 0)]), quiver(2, &[(0, 1)])] {
        let name = if q.rank() == 1 { "Jordan" } else { "A2" };
        let ctx = Pairing::new(q.clone(), SAMPLES.to_vec());
        let family = module_family(&q);
        for m in &family {
            for n in &family {
                if m.total_dim() + n.total_dim() > 3 {
                    continue;
                }
                let degree: Vec<u32> = m.dims.iter().zip(&n.dims).map(|(a, b)| (a + b) as u32).collect();
                let show = |w: &Word| format!("{name} M={:?} N={:?} w={}", m, n, w.render(&q));
                for w in words_of_degree(&q, &degree) {
                    for wp in primings(&w) {
                        product_cases += 1;
                        let check = check_lemma_product(&ctx, m, n, &wp).map_err(err)?;
                        if !check.holds() {
                            product_bad.push(format!("{}: {} vs {}", show(&wp), check.lhs, check.rhs));
                        }
                    }
                    sum_cases += 1;
                    let plain = w.letters().iter().all(|x| x.l == 1);
                    let literal = check_lemma_sum(&ctx, m, n, &w).map_err(err)?;
                    if !literal.holds() {
                        sum_bad.push(format!("{}: {} vs {}", show(&w), literal.lhs, literal.rhs));
                        if plain {
                            sum_bad_plain.push(sum_bad.last().unwrap().clone());
                            all_failures_have_higher_letters = false;
                        }
                    }
                    let split = check_lemma_sum_split(&ctx, m, n, &w).map_err(err)?;
                    if !split.holds() {
                        split_bad.push(format!("{}: {} vs {}", show(&w), split.lhs, split.rhs));
                    }
                }
            }
        }
    }
    out.push(line(
        "10a",
        product_bad.is_empty(),
        format!(
            "<w,(M,N)> = <w1,M><w2,N> on {product_cases} cases {}",
            product_bad.first().map(|s| format!("fails: {s}")).unwrap_or_else(|| "holds".into())
        ),
    ));
    // The pinned witness: M = N = the 1-dim Jordan module, w = S(1,2).
    let jordan = quiver(1, &[(0, 0)]);
    let ctx = Pairing::new(jordan.clone(), SAMPLES.to_vec());
    let one = IntModule { dims: vec![1], maps: vec![vec![vec![0]]] };
    let witness = check_lemma_sum(&ctx, &one, &one, &Word(vec![Letter::new(0, 2)])).map_err(err)?;
    let pinned = witness.lhs.is_one() && witness.rhs.is_zero() && all_failures_have_higher_letters;
    out.push(Line {
        tag: "10b".into(),
        status: if sum_bad.is_empty() { Status::Pass } else { Status::KnownDefect(pinned) },
        text: if sum_bad.is_empty() {
            format!("<w,M+N> = <delta(w),(M,N)> on {sum_cases} cases holds")
        } else {
            format!(
                "<w,M+N> = <delta(w),(M,N)> fails on {} of {sum_cases} cases, e.g. Jordan M=N=k w=S(1,2): {} vs {} \
                 (known defect: delta(S_il) = S_il + S'_il misses the flags splitting one step of size l>1 across both summands)",
                sum_bad.len(),
                witness.lhs,
                witness.rhs
            )
        },
    });
    out.push(line(
        "10b'",
        sum_bad_plain.is_empty(),
        format!(
            "<w,M+N> = <delta(w),(M,N)> on every word with all l=1 {}",
            sum_bad_plain.first().map(|s| format!("fails: {s}")).unwrap_or_else(|| "holds".into())
        ),
    ));
    out.push(line(
        "10b''",
        split_bad.is_empty(),
        format!(
            "<w,M+N> = sum over splittings l=a+b of every letter on {sum_cases} cases {}",
            split_bad.first().map(|s| format!("fails: {s}")).unwrap_or_else(|| "holds".into())
        ),
    ));

    let a2 = quiver(2, &[(0, 1)]);
    let rep = check_serre(&a2, SerreRelation::AdPower { i: 0, j: 1, l: 1 }, &[2, 3], CAP).map_err(err)?;
    out.push(line(
        "10c",
        rep.pass() && !rep.rows.is_empty(),
        format!(
            "(ad S1)^2(S2) on A2 pairs to zero with all {} 1-nilpotent modules of dim (2,1) over F2, F3 {}",
            rep.rows.len(),
            rep.witness().map(|(p, m, v)| format!("except p={p} {m:?}: {v}")).unwrap_or_default()
        ),
    ));
    let free = quiver(2, &[]);
    let rep = check_serre(&free, SerreRelation::Commute { i: 0, k: 1, j: 1, l: 1 }, &[2, 3], CAP).map_err(err)?;
    out.push(line(
        "10d",
        rep.pass() && !rep.rows.is_empty(),
        format!(
            "[S(1,1),S(2,1)] on the arrowless quiver pairs to zero with all {} modules of dim (1,1) over F2, F3 {}",
            rep.rows.len(),
            rep.witness().map(|(p, m, v)| format!("except p={p} {m:?}: {v}")).unwrap_or_default()
        ),
    ));
    Ok(out)
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases: 200,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn property(
    tag: &str,
    name: &str,
    run: impl FnOnce(&mut TestRunner) -> Result<(), String>,
) -> Line {
    let mut r = runner();
    match run(&mut r) {
        Ok(()) => line(tag, true, format!("{name}: 200 cases hold")),
        Err(e) => line(tag, false, format!("{name}: {e}")),
    }
}

fn fail(s: String) -> TestCaseError {
    TestCaseError::fail(s)
}

fn c11_properties() -> Outcome {
    use proptest::prelude::*;
    let mut out = Vec::new();
    out.push(property("11a", "Witt log series = partition enumeration", |r| {
        r.run(&support::witt_case(), |c| support::witt_log_matches_partitions(&c).map_err(fail))
            .map_err(|e| e.to_string())
    }));
    out.push(property("11b", "Moebius roundtrip", |r| {
        let s = (prop::collection::vec(0u32..=6, 1..=3), prop::collection::vec(0u32..50, 1..20));
        r.run(&s, |(l, v)| support::mobius_roundtrip(&l, &v).map_err(fail))
            .map_err(|e| e.to_string())
    }));
    out.push(property("11c", "Freudenthal positivity, W-invariance, sl2 strings", |r| {
        let s = (0usize..5, prop::collection::vec(0i64..=3, 2));
        r.run(&s, |(k, p)| support::freudenthal_properties(k, &p).map_err(fail))
            .map_err(|e| e.to_string())
    }));
    out.push(property("11d", "Peterson = Weyl denominator on A2 and affine A1", |r| {
        let s = (any::<bool>(), prop::collection::vec(0u32..=7, 2));
        r.run(&s, |(affine, l)| {
            let m = support::rows(if affine { &support::AFFINE_A1 } else { &support::A2 });
            support::peterson_matches_denominator(&m, &l).map_err(fail)
        })
        .map_err(|e| e.to_string())
    }));
    Ok(out)
}

struct Criterion {
    id: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    // `cargo test -- <filter>` style arguments are accepted and ignored so the
    // target runs under the usual invocations.
    let criteria = [
        Criterion { id: "1", budget: Duration::from_secs(1), run: c1_rank_one_isotropic },
        Criterion { id: "2", budget: Duration::from_secs(5), run: c2_rank_one_nonisotropic },
        Criterion { id: "3", budget: Duration::from_secs(5), run: c3_rank_two_examples },
        Criterion { id: "4", budget: Duration::from_secs(30), run: c4_twisted_denominator },
        Criterion { id: "5", budget: Duration::from_secs(1), run: c5_characters },
        Criterion { id: "6", budget: Duration::from_secs(1), run: c6_j_coefficients },
        Criterion { id: "7", budget: Duration::from_secs(30), run: c7_monster_lie },
        Criterion { id: "8", budget: Duration::from_secs(60), run: c8_monster_bozec },
        Criterion { id: "9", budget: Duration::from_secs(180), run: c9_quiver },
        Criterion { id: "10", budget: Duration::from_secs(180), run: c10_schofield },
        Criterion { id: "11", budget: Duration::from_secs(120), run: c11_properties },
    ];
    if std::env::args().any(|a| a == "--list") {
        for c in &criteria {
            println!("criterion {}: test", c.id);
        }
        return ExitCode::SUCCESS;
    }
    let mut unexpected = 0;
    let mut defects = 0;
    let total = Instant::now();
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let mut lines = result.unwrap_or_else(|e| vec![line(c.id, false, format!("error: {e}"))]);
        if elapsed > c.budget {
            lines.push(line(
                c.id,
                false,
                format!("runtime {:.2}s exceeds the {}s budget", elapsed.as_secs_f64(), c.budget.as_secs()),
            ));
        }
        for l in &lines {
            let word = if l.status == Status::Pass { "PASS" } else { "FAIL" };
            println!("{word} [{}] {} ({:.2}s)", l.tag, l.text, elapsed.as_secs_f64());
            match l.status {
                Status::Pass => {}
                Status::Fail | Status::KnownDefect(false) => unexpected += 1,
                Status::KnownDefect(true) => defects += 1,
            }
        }
    }
    println!(
        "acceptance: {unexpected} unexpected failure(s), {defects} known defect(s) reproduced as pinned, {:.1}s total",
        total.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
