//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use gkdim::analysis::{equivalence_check, gk_estimate, GkMethod, KMin, Window};
use gkdim::arith::{int, Coeff, Poly, PolyRing, RatFunc, RatFuncField, Rational};
use gkdim::certificates::verify_sub_a;
use gkdim::closure::{cayley_hamilton_check, ex_big_build, regular_rep_charpoly, trace_algebra_generators, CayleyHamilton};
use gkdim::fdalg::{close_to_fdalg, nilpotence_degree, radical, wedderburn_complement, FiniteDimAlgebra};
use gkdim::growth::{growth_sequence, GrowthOptions};
use gkdim::matrix::Matrix;
use gkdim::pipeline::{run_pipeline, PipelineConfig};
use gkdim::presentation::AlgebraPresentation;
use gkdim::span::{independent_subset, span_membership, SpanMembership};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dims<C: Coeff>(p: &AlgebraPresentation<C>, n: usize) -> Result<Vec<usize>, String> {
    growth_sequence(p, &GrowthOptions::up_to(n))
        .map(|t| t.dims().to_vec())
        .map_err(|e| e.to_string())
}

fn difference_degree(dims: &[usize]) -> Result<Option<usize>, String> {
    let e = gk_estimate(dims, None).map_err(|e| e.to_string())?;
    Ok(e.integer_value().filter(|_| e.method == GkMethod::DifferenceDegree))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Elementary symmetric polynomials of `x1..xm`, from the product of
/// `(1 + xi t)`.
fn elementary_symmetric(ring: &std::sync::Arc<PolyRing>, m: usize) -> Vec<Poly> {
    let mut e = vec![Poly::one(ring)];
    for i in 0..m {
        let x = Poly::var(ring, i);
        let mut next = e.clone();
        next.push(Poly::zero(ring));
        for j in 1..next.len() {
            next[j] = next[j].add(&e[j - 1].mul(&x));
        }
        e = next;
    }
    e.split_off(1)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut seen = Vec::new();
    for m in 1..=3 {
        let r = ex_big_build(m).map_err(|e| e.to_string())?;
        let tr = trace_algebra_generators(&r, 1, 1000, 1).map_err(|e| e.to_string())?;
        let dr = difference_degree(&dims(&r, 10)?)?;
        let dt = difference_degree(&dims(&tr.closure, 10)?)?;
        ensure(dr == Some(1) && dt == Some(m), || format!("m={m}: R {dr:?}, TR {dt:?}"))?;
        seen.push(format!("m={m}: R 1, TR {m}"));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} ({secs:.2}s)", seen.join("; ")))
}

fn criterion_2() -> Outcome {
    for m in 2..=3 {
        let r = ex_big_build(m).map_err(|e| e.to_string())?;
        let ring = r.ring.clone();
        let tr = trace_algebra_generators(&r, 1, 1000, 1).map_err(|e| e.to_string())?;
        let as_mats = |ps: &[Poly]| -> Vec<Matrix<Poly>> { ps.iter().map(|p| Matrix::scalar(1, p.clone(), &ring)).collect() };
        let t = as_mats(&tr.t_generators);
        let e = as_mats(&elementary_symmetric(&ring, m));
        for (from, into, what) in [(&t, &e, "T in span(e)"), (&e, &t, "e in span(T)")] {
            for x in from.iter() {
                let member = span_membership(into, x).map_err(|e| e.to_string())?;
                ensure(matches!(member, SpanMembership::InSpan(_)), || format!("m={m}: {what} fails"))?;
            }
        }
        ensure(t.len() == m, || format!("m={m}: {} generators", t.len()))?;
    }
    Ok("m=2,3: span of trace generators equals span of e_1..e_m".into())
}

fn criterion_3() -> Outcome {
    for k in 1..=4 {
        let ring = PolyRing::indexed("x", k);
        let gens = (0..k).map(|i| Matrix::scalar(1, Poly::var(&ring, i), &ring)).collect();
        let p = AlgebraPresentation::new(format!("Q[x1..x{k}]"), ring, 1, gens).map_err(|e| e.to_string())?;
        let got = dims(&p, 12)?;
        let want: Vec<usize> = (0..=12).map(|n| binomial(n + k, k)).collect();
        ensure(got == want, || format!("k={k}: {got:?} vs {want:?}"))?;
    }
    Ok("k=1..4, n<=12 match C(n+k,k)".into())
}

fn random_poly(rng: &mut ChaCha8Rng, ring: &std::sync::Arc<PolyRing>) -> Poly {
    let x = Poly::var(ring, 0);
    let y = Poly::var(ring, 1);
    let monos = [Poly::one(ring), x.clone(), y.clone(), x.mul(&x), x.mul(&y), y.mul(&y)];
    monos.iter().fold(Poly::zero(ring), |acc, m| {
        let c: i64 = rng.gen_range(-3..=3);
        acc.add(&m.scale(&int(c)))
    })
}

fn criterion_4() -> Outcome {
    let ring = PolyRing::new(["x", "y"]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..50 {
        let d = 1 + i % 3;
        let rows = (0..d).map(|_| (0..d).map(|_| random_poly(&mut rng, &ring)).collect()).collect();
        let a = Matrix::from_rows(rows).map_err(|e| e.to_string())?;
        ensure(cayley_hamilton_check(&a, &ring) == CayleyHamilton::Zero, || format!("sample {i}: c_a(a) != 0"))?;
        regular_rep_charpoly(&a, &ring).map_err(|e| format!("sample {i}: {e}"))?;
    }
    Ok("50 samples: c_a(a) = 0 and p_a = c_a^d".into())
}

/// Radical dimension by brute force: `z` (a small integer combination of
/// words) is in the radical iff the left ideal `A z` is nilpotent.
fn brute_force_radical_dim(a: &FiniteDimAlgebra<Rational>, gens: &[Matrix<Rational>]) -> Result<usize, String> {
    let ring = ();
    let d = a.size();
    let mut words = vec![Matrix::identity(d, &ring)];
    words.extend(gens.iter().cloned());
    for g in gens {
        for h in gens {
            words.push(g.mul(h));
        }
    }
    let basis = a.basis();
    let n = words.len();
    let mut found: Vec<Matrix<Rational>> = Vec::new();
    let mut coeffs = vec![-2i64; n];
    loop {
        let z = words
            .iter()
            .zip(&coeffs)
            .fold(Matrix::zero(d, &ring), |acc, (w, &c)| acc.add(&w.scale(&int(c))));
        if !z.is_zero() {
            let ideal: Vec<Matrix<Rational>> = basis.iter().map(|b| b.mul(&z)).collect();
            let mut power = ideal.clone();
            for _ in 0..=a.dim() {
                power = power.iter().flat_map(|p| ideal.iter().map(move |q| p.mul(q))).filter(|m| !m.is_zero()).collect();
                power.sort();
                power.dedup();
            }
            if power.is_empty() {
                found.push(z);
            }
        }
        let mut i = 0;
        while i < n && coeffs[i] == 2 {
            coeffs[i] = -2;
            i += 1;
        }
        if i == n {
            break;
        }
        coeffs[i] += 1;
    }
    independent_subset(&found).map(|i| i.len()).map_err(|e| e.to_string())
}

fn rat(rows: &[&[i64]]) -> Matrix<Rational> {
    gkdim::matrix::rational_matrix(rows)
}

fn criterion_5() -> Outcome {
    let ring = ();
    for d in 2..=4usize {
        let gens: Vec<Matrix<Rational>> = (0..d)
            .flat_map(|i| (i..d).map(move |j| (i, j)))
            .map(|(i, j)| Matrix::unit(d, i, j, &ring))
            .collect();
        let p = AlgebraPresentation::new(format!("UT{d}"), ring, d, gens).map_err(|e| e.to_string())?;
        let a = close_to_fdalg(&p, d * d + 1).map_err(|e| e.to_string())?;
        let rad = radical(&a).map_err(|e| e.to_string())?;
        let deg = nilpotence_degree(&a, &rad).map_err(|e| e.to_string())?;
        ensure(rad.len() == d * (d - 1) / 2 && deg == d, || format!("d={d}: radical {} degree {deg}", rad.len()))?;
        let w = wedderburn_complement(&a, 0).map_err(|e| format!("d={d}: {e}"))?;
        let b = &w.complement;
        let mut closed = true;
        for x in b {
            for y in b {
                closed &= matches!(span_membership(b, &x.mul(y)), Ok(SpanMembership::InSpan(_)));
            }
        }
        let mut all = b.clone();
        all.extend(rad.iter().cloned());
        let spans = independent_subset(&all).map_err(|e| e.to_string())?.len() == a.dim();
        let sum = w.idempotents.iter().fold(Matrix::zero(d, &ring), |acc, e| acc.add(e));
        let orth = w.idempotents.iter().enumerate().all(|(i, e)| {
            w.idempotents.iter().enumerate().all(|(j, f)| if i == j { e.mul(f) == *e } else { e.mul(f).is_zero() })
        });
        ensure(
            closed && spans && b.len() + rad.len() == a.dim() && sum == Matrix::identity(d, &ring) && orth && w.idempotents.len() == d,
            || format!("d={d}: complement invariants fail"),
        )?;
    }
    let corpus: Vec<Vec<Matrix<Rational>>> = vec![
        vec![rat(&[&[1, 0], &[0, 2]]), rat(&[&[0, 1], &[0, 0]])],
        vec![rat(&[&[0, 1], &[0, 0]])],
        vec![rat(&[&[1, 0], &[0, 0]])],
        vec![rat(&[&[1, 1], &[0, 2]]), rat(&[&[1, -1], &[0, 0]])],
        vec![rat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])],
        vec![rat(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]), rat(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]])],
        vec![rat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]), rat(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]])],
        vec![rat(&[&[0, 2], &[1, 0]])],
        vec![rat(&[&[0, 1], &[0, 0]]), rat(&[&[0, 0], &[1, 0]])],
    ];
    let mut checked = 0;
    for gens in corpus {
        let d = gens[0].size();
        let p = AlgebraPresentation::new("c", ring, d, gens.clone()).map_err(|e| e.to_string())?;
        let a = close_to_fdalg(&p, d * d + 1).map_err(|e| e.to_string())?;
        if a.dim() > 4 {
            continue;
        }
        let rad = radical(&a).map_err(|e| e.to_string())?;
        let oracle = brute_force_radical_dim(&a, &gens)?;
        ensure(rad.len() == oracle, || format!("{gens:?}: radical {} vs oracle {oracle}", rad.len()))?;
        checked += 1;
    }
    Ok(format!("UT2..UT4 structure and complements; radical matches brute force on {checked} algebras"))
}

fn criterion_6() -> Outcome {
    let f = RatFuncField::default();
    let x = Matrix::scalar(1, RatFunc::x(), &f);
    let xi = Matrix::scalar(1, RatFunc::x().inv().unwrap(), &f);
    let qx = AlgebraPresentation::new("Q[x]", f.clone(), 1, vec![x.clone()]).map_err(|e| e.to_string())?;
    let laurent = AlgebraPresentation::new("Q[x,1/x]", f, 1, vec![x.clone(), xi.clone()]).map_err(|e| e.to_string())?;
    let eq = equivalence_check(&dims(&qx, 12)?, &dims(&laurent, 12)?, Window(1, 12), ("Q[x]", "Q[x,1/x]")).map_err(|e| e.to_string())?;
    ensure(
        eq.forward.k_min == KMin::Constant(1) && eq.backward.k_min == KMin::Constant(2),
        || format!("K_min {} and {}", eq.forward.k_min, eq.backward.k_min),
    )?;
    let cert = verify_sub_a(&qx, &[xi], &x, &x, 6, Window(1, 12), 1).map_err(|e| e.to_string())?;
    ensure(cert.is_verified(), || format!("certificate {:?}", cert.verdict))?;
    Ok("K_min 1 and 2 on [1,12]; localization certificate verified".into())
}

fn ratfunc_doc(entries: &[&[&[&str]]]) -> Result<AlgebraPresentation<RatFunc>, String> {
    let f = RatFuncField::default();
    let d = entries[0].len();
    let gens = entries
        .iter()
        .map(|rows| {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|s| RatFunc::parse(s, &f).map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Matrix::from_rows(rows).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, String>>()?;
    AlgebraPresentation::new("ut", f, d, gens).map_err(|e| e.to_string())
}

fn criterion_7() -> Outcome {
    let family: Vec<&[&[&[&str]]]> = vec![
        &[&[&["x", "0"], &["0", "1"]], &[&["0", "1"], &["0", "0"]]],
        &[&[&["x", "0"], &["0", "0"]], &[&["0", "1"], &["0", "0"]]],
        &[&[&["x", "0"], &["0", "x"]], &[&["0", "1"], &["0", "0"]]],
        &[&[&["x", "0"], &["0", "x+1"]], &[&["0", "1"], &["0", "0"]]],
        &[
            &[&["x", "0", "0"], &["0", "1", "0"], &["0", "0", "x"]],
            &[&["0", "1", "0"], &["0", "0", "0"], &["0", "0", "0"]],
            &[&["0", "0", "0"], &["0", "0", "1"], &["0", "0", "0"]],
        ],
        &[
            &[&["x", "0", "0"], &["0", "x^2", "0"], &["0", "0", "1"]],
            &[&["0", "1", "1"], &["0", "0", "0"], &["0", "0", "0"]],
        ],
    ];
    let mut degrees = Vec::new();
    for (i, entries) in family.iter().enumerate() {
        let p = ratfunc_doc(entries)?;
        let run = run_pipeline(&p, &PipelineConfig::default()).map_err(|e| format!("example {i}: {e}"))?;
        let r = &run.report;
        ensure(r.integral, || format!("example {i}: {}", r.verdict))?;
        ensure(r.windows_finite(), || format!("example {i}: a dominance window failed"))?;
        ensure(r.exact_checks_pass(), || format!("example {i}: an exact check failed"))?;
        degrees.push(r.d_estimate.value_text());
    }
    Ok(format!("{} examples, D degrees [{}] equal R degrees", family.len(), degrees.join(",")))
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, body: &str| -> Result<String, String> {
        let p = dir.path().join(name);
        std::fs::write(&p, body).map_err(|e| e.to_string())?;
        Ok(p.to_str().unwrap().to_string())
    };
    let gens = [
        "[[\"x\", \"0\", \"0\"], [\"0\", \"1\", \"0\"], [\"0\", \"0\", \"x\"]]",
        "[[\"0\", \"1\", \"0\"], [\"0\", \"0\", \"0\"], [\"0\", \"0\", \"0\"]]",
        "[[\"0\", \"0\", \"0\"], [\"0\", \"0\", \"1\"], [\"0\", \"0\", \"0\"]]",
    ];
    let body = |order: [usize; 3]| {
        format!(
            "label = \"ut3\"\nring = \"Q(x)\"\nsize = 3\ngenerators = [{}]\n",
            order.iter().map(|&i| gens[i]).collect::<Vec<_>>().join(", ")
        )
    };
    let a = write("a.toml", &body([0, 1, 2]))?;
    let b = write("b.toml", &body([2, 0, 1]))?;
    let bin = env!("CARGO_BIN_EXE_gkdim");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let o = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        ensure(o.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)))?;
        Ok(o.stdout)
    };
    for (cmd, format) in [("growth", "csv"), ("growth", "json"), ("pipeline", "json")] {
        let one = run(&[cmd, &a, "--format", format, "--workers", "1"])?;
        let four = run(&[cmd, &b, "--format", format, "--workers", "4"])?;
        ensure(one == four, || format!("{cmd} {format} output differs"))?;
    }
    ensure(Path::new(bin).exists(), || "binary missing".into())?;
    Ok("growth tables and pipeline report byte-identical (workers 1 vs 4, permuted generators)".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 diagonal algebra and its trace closure", criterion_1),
        ("2 trace generators are elementary symmetric", criterion_2),
        ("3 polynomial ring growth", criterion_3),
        ("4 Cayley-Hamilton suite", criterion_4),
        ("5 finite-dimensional structure", criterion_5),
        ("6 localization equivalence", criterion_6),
        ("7 pipeline integrality", criterion_7),
        ("8 determinism", criterion_8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
