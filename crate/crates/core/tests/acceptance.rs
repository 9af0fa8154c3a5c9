//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs with `harness = false`; the process exits non-zero if any criterion
//! fails. The two simulation trends take minutes on one core.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qbp_core::code::StabilizerCode;
use qbp_core::config::{DecoderConfig, Modifier, Schedule, TraceSelection};
use qbp_core::construct::{bch_parity, bicycle_code, five_qubit_code, hypergraph_product, BchVariant, BicycleSpec};
use qbp_core::gf2::BinaryMatrix;
use qbp_core::sim::{run_point, DecoderSpec, Execution, SimPoint, StopRule};
use qbp_core::{bp4_decode, Pauli, PauliString, QuaternaryPrior, Status};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn execution() -> Execution {
    #[cfg(feature = "parallel")]
    return Execution::Parallel { threads: 0 };
    #[cfg(not(feature = "parallel"))]
    Execution::Sequential
}

fn weight_one_suite() -> Verdict {
    let code = five_qubit_code();
    let priors = vec![QuaternaryPrior::depolarizing(0.1).unwrap(); 5];
    let serial = DecoderConfig::serial().with_max_iter(30);
    let parallel = DecoderConfig::parallel().with_max_iter(30).with_trace(TraceSelection::Only(vec![3]));
    let mut serial_ok = 0;
    let mut parallel_ok = Vec::new();
    let mut parallel_failed = Vec::new();
    let mut alternates = false;
    for q in 0..5 {
        for p in Pauli::NON_IDENTITY {
            let e = PauliString::single(5, q, p);
            let z = code.syndrome(&e).unwrap();
            let r = bp4_decode(&code, &z, &priors, &serial).unwrap();
            if r.status == Status::Success && r.estimate == e {
                serial_ok += 1;
            }
            let r = bp4_decode(&code, &z, &priors, &parallel).unwrap();
            if r.status == Status::Success && r.estimate == e {
                parallel_ok.push(e.to_string());
            } else {
                if r.status == Status::Fail {
                    let winners: Vec<usize> = r
                        .trace
                        .unwrap()
                        .iter()
                        .map(|it| {
                            let b = it.marginals[0].1;
                            (0..4).fold(0, |best, w| if b[w] > b[best] { w } else { best })
                        })
                        .collect();
                    alternates = winners.len() == 30 && winners.windows(2).all(|w| w[0] != w[1]);
                }
                parallel_failed.push(e.to_string());
            }
        }
    }
    let pass = serial_ok == 15 && parallel_ok.len() == 14 && parallel_failed == ["IIIYI"] && alternates;
    verdict(
        pass,
        format!(
            "serial {serial_ok}/15, parallel {}/15 failing {:?}, qubit 4 argmax alternates: {alternates}",
            parallel_ok.len(),
            parallel_failed
        ),
    )
}

fn oracle_equivalence() -> Verdict {
    let instances = 1200;
    let results: Vec<_> = (0..instances).map(common::oracle_instance).collect();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let multi = results.iter().filter(|r| matches!(r, Ok(i) if *i > 1)).count();
    match failures.first() {
        None => verdict(true, format!("{instances} instances agree, {multi} needed more than one iteration")),
        Some(first) => verdict(false, format!("{} of {instances} disagree; first: {first}", failures.len())),
    }
}

fn tree_exactness() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    for seed in 0..100 {
        let schedule = if seed % 2 == 0 { Schedule::Parallel } else { Schedule::Serial };
        for r in [common::tree_instance_bp4(seed, schedule), common::tree_instance_bp2(seed, schedule)] {
            match r {
                Ok(gap) => worst = worst.max(gap),
                Err(e) => errors.push(e),
            }
        }
    }
    verdict(
        errors.is_empty() && worst < 1e-9,
        format!("100 trees each for BP2 and BP4, worst gap {worst:.2e}, {} errors", errors.len()),
    )
}

fn modifier_identities() -> Verdict {
    let failures: Vec<String> = (0..100).filter_map(|s| common::modifier_identity_instance(s).err()).collect();
    match failures.first() {
        None => verdict(true, "100 instances bit-identical"),
        Some(f) => verdict(false, format!("{} differ; first: {f}", failures.len())),
    }
}

/// Rank over GF(2) by elimination on dense rows.
fn dense_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
    }
    rank
}

fn symplectic_rows(code: &StabilizerCode) -> Vec<Vec<bool>> {
    code.rows()
        .iter()
        .map(|r| {
            let p = common::paulis(r);
            p.iter().map(|q| q.x()).chain(p.iter().map(|q| q.z())).collect()
        })
        .collect()
}

fn self_orthogonal(code: &StabilizerCode) -> bool {
    let rows = common::code_rows(code);
    rows.iter().enumerate().all(|(i, a)| rows[i + 1..].iter().all(|b| common::commutes_dense(a, b)))
}

fn constructions() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;

    let code = hypergraph_product(&bch_parity(BchVariant::Hamming7), &bch_parity(BchVariant::Bch15_7)).unwrap();
    let support = |want: Pauli| -> BinaryMatrix {
        let rows: Vec<Vec<usize>> = common::code_rows(&code)
            .iter()
            .filter(|r| r.iter().all(|&p| p == want || p == Pauli::I))
            .map(|r| (0..r.len()).filter(|&q| r[q] == want).collect())
            .collect();
        BinaryMatrix::from_rows(code.n(), rows).unwrap()
    };
    let (hx, hz) = (support(Pauli::X), support(Pauli::Z));
    let orthogonal = hx.num_rows() + hz.num_rows() == code.m() && hx.mul_transpose(&hz).unwrap().is_zero();
    let k = code.n() - dense_rank(symplectic_rows(&code));
    pass &= code.n() == 129 && k == 28 && orthogonal;
    notes.push(format!("HGP N={} K={k} HX·HZᵀ=0: {orthogonal}", code.n()));

    for (n, m, w, need) in [(256, 112, 8, 32), (800, 200, 15, 400)] {
        let code = bicycle_code(&BicycleSpec { n, m, circulant_row_weight: w, seed: BICYCLE_SEED }).unwrap();
        let k = code.n() - dense_rank(symplectic_rows(&code));
        let ok = self_orthogonal(&code) && k >= need;
        pass &= ok && code.n() == n;
        notes.push(format!("bicycle({n},{m},{w}) N={} K={k}", code.n()));
    }
    verdict(pass, notes.join("; "))
}

const BICYCLE_SEED: u64 = 1;
const SIM_SEED: u64 = 1;

fn describe(p: &SimPoint) -> String {
    format!(
        "{} eps={}: {}/{} = {:.2e} [{:.2e}, {:.2e}]{}",
        p.decoder.label(),
        p.epsilon,
        p.logical_errors(),
        p.trials,
        p.logical_error_rate(),
        p.ci_low,
        p.ci_high,
        if p.partial { " capped" } else { "" }
    )
}

/// At most half the reference rate, with disjoint 95% intervals.
fn clearly_better(p: &SimPoint, reference: &SimPoint) -> bool {
    p.logical_error_rate() <= 0.5 * reference.logical_error_rate() && p.ci_high < reference.ci_low
}

fn bicycle_trend() -> Verdict {
    let code = bicycle_code(&BicycleSpec { n: 256, m: 112, circulant_row_weight: 8, seed: BICYCLE_SEED }).unwrap();
    let stop = StopRule { min_logical_errors: 100, max_trials: 1_000_000 };
    let point = |eps: f64, modifier: Modifier| {
        let spec = DecoderSpec::bp4(DecoderConfig::serial().with_modifier(modifier));
        let p = run_point(&code, "bicycle-256-32", eps, &spec, stop, SIM_SEED, execution()).unwrap();
        eprintln!("    {}", describe(&p));
        p
    };
    let (low, high) = (0.008, 0.012);
    let baseline = point(low, Modifier::None);
    let mut lines = vec![describe(&baseline)];
    let mut winners = Vec::new();
    let families: [fn(f64) -> Modifier; 2] = [Modifier::CheckNormalization, Modifier::VariableNormalization];
    for family in families {
        let mut found = None;
        for alpha in [1.5, 1.25, 2.0] {
            let p = point(low, family(alpha));
            let better = clearly_better(&p, &baseline);
            lines.push(describe(&p));
            if better {
                found = Some(family(alpha));
                break;
            }
        }
        winners.push(found);
    }
    let pass = winners.iter().all(Option::is_some);
    for m in std::iter::once(Modifier::None).chain(winners.iter().flatten().copied()) {
        lines.push(describe(&point(high, m)));
    }
    verdict(pass, lines.join("; "))
}

fn schedule_trend() -> Verdict {
    let code = hypergraph_product(&bch_parity(BchVariant::Hamming7), &bch_parity(BchVariant::Bch15_7)).unwrap();
    let stop = StopRule { min_logical_errors: 100, max_trials: 1_000_000 };
    let eps = 0.01;
    let run = |cfg: DecoderConfig| run_point(&code, "hgp-129-28", eps, &DecoderSpec::bp4(cfg), stop, SIM_SEED, execution()).unwrap();
    let parallel = run(DecoderConfig::parallel());
    let serial = run(DecoderConfig::serial());
    let pass = parallel.logical_error_rate() >= 1e-3
        && serial.logical_error_rate() < parallel.logical_error_rate()
        && serial.ci_high < parallel.ci_low;
    verdict(pass, format!("{}; {}", describe(&parallel), describe(&serial)))
}

type Property = fn(u32) -> Result<(), String>;

fn property_suite() -> Verdict {
    let runs: [(&str, u32, Property); 4] = [
        ("success consistency", 4000, common::property_success_is_consistent),
        ("outcome buckets", 3000, common::property_outcomes_exhaustive),
        ("stabilizer invariance", 3000, common::property_stabilizer_invariance),
        ("worker independence", 100, common::property_worker_independence),
    ];
    let total: u32 = runs.iter().map(|r| r.1).sum();
    let failures: Vec<String> =
        runs.iter().filter_map(|(name, cases, f)| f(*cases).err().map(|e| format!("{name}: {e}"))).collect();
    verdict(failures.is_empty() && total >= 10_000, format!("{total} cases, failures: {failures:?}"))
}

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Verdict,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "five-qubit weight-one suite", limit: Some(Duration::from_secs(1)), run: weight_one_suite },
        Criterion { name: "oracle equivalence", limit: Some(Duration::from_secs(60)), run: oracle_equivalence },
        Criterion { name: "tree exactness", limit: Some(Duration::from_secs(60)), run: tree_exactness },
        Criterion { name: "modifier identities", limit: Some(Duration::from_secs(10)), run: modifier_identities },
        Criterion { name: "construction parameters", limit: Some(Duration::from_secs(10)), run: constructions },
        Criterion { name: "[[256,32]] normalization trend", limit: None, run: bicycle_trend },
        Criterion { name: "[[129,28]] schedule trend", limit: None, run: schedule_trend },
        Criterion { name: "property suite", limit: Some(Duration::from_secs(60)), run: property_suite },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let pass = v.pass && in_time;
        failed += usize::from(!pass);
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {:.0} s", l.as_secs_f64()));
        println!(
            "{} {}. {} ({:.2} s{limit}): {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            c.name,
            elapsed.as_secs_f64(),
            v.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
