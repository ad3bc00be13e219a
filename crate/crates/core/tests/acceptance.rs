//! The nine acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fock_duality::decompose::{decompose, DecompositionReport};
use fock_duality::diagram::{
    conjugate, frame_fill_pairs, helmers_pairs, rowe_w_from_lambda, GLDiagram, OGroupDiagram, PairType,
};
use fock_duality::verify::{run_verify, Bounds, Suite, VerifySummary};
use fock_duality::HalfInt;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn hv(twice: &[i64]) -> Vec<HalfInt> {
    twice.iter().map(|&t| HalfInt::from_twice(t)).collect()
}

fn ints(v: &[i64]) -> Vec<HalfInt> {
    v.iter().map(|&n| HalfInt::from_int(n)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn summary_outcome(s: VerifySummary) -> Outcome {
    ensure(s.all_pass() && s.checks.iter().all(|c| c.cases > 0), || s.render_table())
}

fn common_checks(r: &DecompositionReport) -> Outcome {
    let (d, k) = (r.d, r.k);
    let total: usize = r.records.iter().map(|x| x.dim).sum();
    ensure(r.checks.multiplicity_free, || format!("{} d={d} k={k}: repeated signed weight", r.pair_type))?;
    ensure(r.checks.disjoint, || format!("{} d={d} k={k}: modules overlap", r.pair_type))?;
    ensure(r.checks.dimension_sum && total as u64 == 1u64 << (d * k), || {
        format!("{} d={d} k={k}: dimensions sum to {total}, want {}", r.pair_type, 1u64 << (d * k))
    })
}

fn criterion_1() -> Outcome {
    let table = frame_fill_pairs(13, 4);
    let signed = table.signed_set();
    let lambda = ints(&[4, 3, 3, 2, 1, 0]);
    for last in [3, -3] {
        let w = hv(&[11, 7, 5, last]);
        ensure(signed.contains(&(lambda.clone(), w.clone())), || format!("missing λ=(4,3,3,2,1,0) w={w:?}"))?;
    }
    let og = OGroupDiagram::new(GLDiagram::new(vec![4, 3, 3, 2, 1, 1, 1, 1]).unwrap(), 13).map_err(|e| e.to_string())?;
    let w = rowe_w_from_lambda(&og, 4).map_err(|e| e.to_string())?;
    ensure(w.rows() == hv(&[11, 7, 5, -3]).as_slice(), || format!("rowe w = {w}"))
}

fn criterion_2() -> Outcome {
    let cases = [(1, 1), (2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (4, 3), (6, 2), (5, 3)];
    for (d, k) in cases {
        let r = decompose(PairType::OO, d, k).map_err(|e| e.to_string())?;
        common_checks(&r)?;
        let want = frame_fill_pairs(d, k).signed_set();
        ensure(r.signed_set() == want, || format!("o-o d={d} k={k}: {:?}", r.checks.prediction_diff))?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    for (d, k) in [(2, 1), (4, 1), (2, 2), (4, 2), (6, 1), (6, 2), (4, 3)] {
        let r = decompose(PairType::SpSp, d, k).map_err(|e| e.to_string())?;
        common_checks(&r)?;
        let want = helmers_pairs(d, k).map_err(|e| e.to_string())?.signed_set();
        ensure(r.signed_set() == want, || format!("sp-sp d={d} k={k}: {:?}", r.checks.prediction_diff))?;
    }
    Ok(())
}

fn as_diagram(v: &[HalfInt]) -> Option<GLDiagram> {
    let rows: Option<Vec<usize>> =
        v.iter().map(|h| (h.is_integral() && h.twice() >= 0).then_some((h.twice() / 2) as usize)).collect();
    GLDiagram::new(rows?).ok()
}

fn criterion_4() -> Outcome {
    for (d, k) in [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)] {
        let r = decompose(PairType::GlGl, d, k).map_err(|e| e.to_string())?;
        common_checks(&r)?;
        ensure(r.checks.prediction_diff.is_empty(), || format!("gl-gl d={d} k={k}: {:?}", r.checks.prediction_diff))?;
        let sectors = (d * k + 1) as u64;
        let mut seen = vec![0u64; sectors as usize];
        for rec in &r.records {
            let case = || format!("gl-gl d={d} k={k} λ={:?} w={:?}", rec.lambda, rec.w);
            let (Some(l), Some(m)) = (as_diagram(&rec.lambda), as_diagram(&rec.w)) else {
                return Err(format!("{}: not a diagram", case()));
            };
            ensure(m == conjugate(&l), || format!("{}: not conjugate", case()))?;
            ensure(l.width() <= k && m.width() <= d, || format!("{}: too wide", case()))?;
            let n = l.size() as u32;
            ensure(rec.vector.entries().iter().all(|(b, _)| b.count_ones() == n), || {
                format!("{}: mixed particle number", case())
            })?;
            seen[n as usize] += rec.dim as u64;
        }
        for (n, got) in seen.iter().enumerate() {
            let want = binomial((d * k) as u64, n as u64);
            ensure(*got == want, || format!("gl-gl d={d} k={k} n={n}: sector dimension {got}, want {want}"))?;
        }
    }
    Ok(())
}

fn binomial(n: u64, r: u64) -> u64 {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_5() -> Outcome {
    summary_outcome(run_verify(Suite::Involutions, &Bounds::with_max_dk(14)).map_err(|e| e.to_string())?)
}

fn criterion_6() -> Outcome {
    summary_outcome(run_verify(Suite::Hw, &Bounds::with_max_dk(14)).map_err(|e| e.to_string())?)
}

fn criterion_7() -> Outcome {
    for d in [2, 3, 4] {
        let bounds = Bounds { d: Some(d), ..Bounds::default() };
        summary_outcome(run_verify(Suite::Quasispin, &bounds).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let bounds = Bounds { max_n: 5, max_tensor_d: 4, ..Bounds::default() };
    summary_outcome(run_verify(Suite::Tensor, &bounds).map_err(|e| e.to_string())?)?;
    ensure(t.elapsed() < Duration::from_secs(60), || format!("took {:?}", t.elapsed()))
}

fn criterion_9() -> Outcome {
    summary_outcome(run_verify(Suite::Commutant, &Bounds::with_max_dk(14)).map_err(|e| e.to_string())?)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("diagram-level d=13 k=4 entries", criterion_1),
        ("o-o brute-force decomposition", criterion_2),
        ("sp-sp brute-force decomposition", criterion_3),
        ("gl-gl particle-number sectors", criterion_4),
        ("involutions r, σ for d·k ≤ 14", criterion_5),
        ("highest-weight states for d·k ≤ 14", criterion_6),
        ("quasispin and seniority, k=2", criterion_7),
        ("tensor suite", criterion_8),
        ("commutant and closure for d·k ≤ 14", criterion_9),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {n}: PASS  {label} ({secs:.2}s)"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL  {label} ({secs:.2}s)\n{msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
