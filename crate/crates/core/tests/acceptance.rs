//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cnz_core::circuit::{Circuit, Qubit};
use cnz_core::codec::{emit_text, export_quirk_url, parse_quirk_url, parse_text};
use cnz_core::resources::{compare, count};
use cnz_core::simulator::{unitary_of, Operator};
use cnz_core::synthesis::{
    and_compute, and_uncompute, cccz_6t, cccz_6t_on, synth_cnz, CnzSpec, Method,
};
use cnz_core::verify::{check_implements, check_phase_identity, oracle_cnz, phase_identity_sides};
use nalgebra::DMatrix;
use num_complex::Complex64;

const TOL: f64 = 1e-9;
const HARNESS_URL: &str = include_str!("data/cccz_harness.url");

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Debug) -> String {
    format!("{e:?}")
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let circuit = cccz_6t();
    let v = check_implements(&circuit, &oracle_cnz(3).map_err(err)?, TOL).map_err(err)?;
    let elapsed = start.elapsed();
    ensure(v.passed, format!("verification failed: {v:?}"))?;
    let rc = count(&circuit).map_err(err)?;
    ensure(
        (rc.t, rc.measurements, rc.ancillas, rc.conditioned_gates) == (6, 1, 1, 2),
        format!("counts {rc:?}"),
    )?;
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "T=6, 1 measurement, 1 ancilla, 2 conditioned; {elapsed:.2?}"
    ))
}

fn ac2() -> Outcome {
    let mut summary = Vec::new();
    for n in 3..=6 {
        let start = Instant::now();
        let spec = CnzSpec::new(n).map_err(err)?;
        let oracle = oracle_cnz(n).map_err(err)?;
        for (method, expected) in [
            (Method::Optimized, 4 * n - 6),
            (Method::Baseline, 4 * n - 4),
        ] {
            let circuit = synth_cnz(spec, method).map_err(err)?;
            let t = count(&circuit).map_err(err)?.t;
            ensure(
                t == expected,
                format!("n={n} {method:?}: T={t}, expected {expected}"),
            )?;
            let v = check_implements(&circuit, &oracle, TOL).map_err(err)?;
            ensure(v.passed, format!("n={n} {method:?} does not verify"))?;
        }
        let row = compare(spec).map_err(err)?;
        ensure(row.saving == 2, format!("n={n}: saving {}", row.saving))?;
        let elapsed = start.elapsed();
        if n == 6 {
            ensure(
                elapsed < Duration::from_secs(60),
                format!("n=6 took {elapsed:?}"),
            )?;
        }
        summary.push(format!(
            "n={n} {}/{} ({elapsed:.2?})",
            row.baseline_t, row.optimized_t
        ));
    }
    Ok(summary.join(", "))
}

fn ac3() -> Outcome {
    // i^k for k mod 4, computed independently in floating point.
    let ipow = |k: u32| Complex64::new(0.0, 1.0).powu(k);
    let mut cases = 0;
    for x in 0..16u32 {
        let [a, b, c, d] = [0, 1, 2, 3].map(|k| x >> k & 1);
        let lhs = ipow((a & b) ^ (c & d));
        let rhs = ipow(a & b) * ipow(c & d) * if a & b & c & d == 1 { -1.0 } else { 1.0 };
        ensure(
            (lhs - rhs).norm() < 1e-12,
            format!("oracle disagrees at {x:04b}"),
        )?;
        let (l, r) = phase_identity_sides(a == 1, b == 1, c == 1, d == 1);
        let to_f = |z: num_complex::Complex<i64>| Complex64::new(z.re as f64, z.im as f64);
        ensure(
            l == r && (to_f(l) - lhs).norm() < 1e-12,
            format!("library sides differ at {x:04b}"),
        )?;
        cases += 1;
    }
    ensure(
        check_phase_identity(),
        "check_phase_identity returned false",
    )?;
    Ok(format!("{cases}/16 exact cases"))
}

fn ac4() -> Outcome {
    let (a, b, anc) = (Qubit(0), Qubit(1), Qubit(2));
    let compute = and_compute(a, b, anc).map_err(err)?;
    let uncompute = and_uncompute(a, b, anc).map_err(err)?;
    let u = unitary_of(&compute).map_err(err)?;
    let mut iso = DMatrix::from_element(8, 4, Complex64::new(0.0, 0.0));
    for x in 0..4usize {
        iso[(x | ((x & 1) & (x >> 1)) << 2, x)] = Complex64::new(1.0, 0.0);
    }
    let dev = (u.matrix().columns(0, 4) - &iso)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    ensure(dev <= TOL, format!("isometry deviation {dev:e}"))?;
    ensure(
        compute.t_count() <= 4,
        format!("compute T={}", compute.t_count()),
    )?;
    ensure(
        uncompute.t_count() == 0,
        format!("uncompute T={}", uncompute.t_count()),
    )?;
    let both = compute.compose(&uncompute).map_err(err)?;
    let v = check_implements(&both, &Operator::identity(4), TOL).map_err(err)?;
    ensure(v.passed, format!("compute+uncompute not identity: {v:?}"))?;
    Ok(format!(
        "isometry deviation {dev:.1e}, T={}+{}",
        compute.t_count(),
        uncompute.t_count()
    ))
}

fn ac5() -> Outcome {
    let v = check_implements(&cccz_6t(), &oracle_cnz(3).map_err(err)?, TOL).map_err(err)?;
    let spread = v.max_phase_spread();
    let total: f64 = v.groups.iter().map(|g| g.probability).sum();
    ensure(spread <= TOL, format!("phase spread {spread:e}"))?;
    ensure(
        (total - 1.0).abs() <= TOL,
        format!("probability total {total}"),
    )?;
    ensure(v.passed, "verdict failed")?;
    let phases: Vec<String> = v
        .groups
        .iter()
        .map(|g| {
            format!(
                "m={} λ={:.3}{:+.3}i",
                g.outcome_string(),
                g.phase.re,
                g.phase.im
            )
        })
        .collect();
    Ok(format!(
        "spread {spread:.1e}, Σp={total:.12}; {}",
        phases.join(", ")
    ))
}

fn ac6() -> Outcome {
    let oracle = oracle_cnz(3).map_err(err)?;
    let mut passed = 0;
    for perm in permutations(&[0, 1, 2, 3]) {
        let q = |i: usize| Qubit(perm[i]);
        let circuit = cccz_6t_on(q(0), q(1), q(2), q(3), Qubit(4)).map_err(err)?;
        let v = check_implements(&circuit, &oracle, TOL).map_err(err)?;
        ensure(v.passed, format!("roles {perm:?} fail"))?;
        passed += 1;
    }
    ensure(passed == 24, format!("{passed} permutations"))?;
    Ok("24/24 role permutations".into())
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn synthesized() -> Result<Vec<(usize, Circuit)>, String> {
    let mut out = vec![(3, cccz_6t())];
    for n in 2..=6 {
        let spec = CnzSpec::new(n).map_err(err)?;
        out.push((n, synth_cnz(spec, Method::Baseline).map_err(err)?));
        if n >= 3 {
            out.push((n, synth_cnz(spec, Method::Optimized).map_err(err)?));
        }
    }
    Ok(out)
}

fn ac7() -> Outcome {
    let circuits = synthesized()?;
    for (n, c) in &circuits {
        let back = parse_text(&emit_text(c).map_err(err)?).map_err(err)?;
        ensure(&back == c, format!("text round-trip differs for n={n}"))?;
    }
    let fig = parse_quirk_url(HARNESS_URL.trim()).map_err(err)?;
    ensure(
        fig.data_qubits().len() == 4,
        "harness import is not 4 data qubits",
    )?;
    let v = check_implements(&fig, &oracle_cnz(3).map_err(err)?, TOL).map_err(err)?;
    ensure(v.passed, "harness circuit does not verify")?;
    for (n, c) in &circuits {
        let oracle = oracle_cnz(*n).map_err(err)?;
        let back = parse_quirk_url(&export_quirk_url(c).map_err(err)?).map_err(err)?;
        let before = check_implements(c, &oracle, TOL).map_err(err)?;
        let after = check_implements(&back, &oracle, TOL).map_err(err)?;
        ensure(
            before == after,
            format!("verdict changed by Quirk round-trip for n={n}"),
        )?;
    }
    Ok(format!(
        "{} circuits round-trip; harness URL verifies",
        circuits.len()
    ))
}

fn ac8() -> Outcome {
    let twice = cccz_6t().compose(&cccz_6t()).map_err(err)?;
    let v = check_implements(&twice, &Operator::identity(16), TOL).map_err(err)?;
    ensure(v.passed, format!("CCCZ² is not the identity: {v:?}"))?;
    Ok(format!("{} outcome groups, all identity", v.groups.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "CCCZ with six T gates", ac1),
        ("AC2", "C^nZ T = 4n-6 vs 4n-4", ac2),
        ("AC3", "phase identity", ac3),
        ("AC4", "AND compute/uncompute", ac4),
        ("AC5", "deterministic outcome phases", ac5),
        ("AC6", "role permutation symmetry", ac6),
        ("AC7", "codec round-trips", ac7),
        ("AC8", "CCCZ squared is identity", ac8),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
