//! Instance generators and brute-force references shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use qbp_core::bp2::Bp2Decoder;
use qbp_core::code::{Outcome, StabilizerCode, Syndrome};
use qbp_core::config::{DecoderConfig, Modifier, Schedule, TraceSelection};
use qbp_core::construct::five_qubit_code;
use qbp_core::conventional::conventional_bp4;
use qbp_core::engine::MessageView;
use qbp_core::gf2::BinaryMatrix;
use qbp_core::sim::{run_point, DecoderSpec, Execution, StopRule};
use qbp_core::{bp4_decode, BinaryPrior, Bits, Bp4Decoder, Pauli, PauliString, QuaternaryPrior};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_pauli(rng: &mut ChaCha8Rng) -> Pauli {
    Pauli::NON_IDENTITY[rng.gen_range(0..3)]
}

/// Commutation parity of two Pauli strings, qubit by qubit.
pub fn commutes_dense(a: &[Pauli], b: &[Pauli]) -> bool {
    !a.iter().zip(b).fold(false, |acc, (x, y)| acc ^ x.inner(*y))
}

/// Syndrome computed directly from the row list.
pub fn dense_syndrome(rows: &[Vec<Pauli>], e: &[Pauli]) -> Vec<bool> {
    rows.iter().map(|r| !commutes_dense(r, e)).collect()
}

pub fn paulis(p: &PauliString) -> Vec<Pauli> {
    p.iter().collect()
}

pub fn code_rows(code: &StabilizerCode) -> Vec<Vec<Pauli>> {
    code.rows().iter().map(paulis).collect()
}

/// Random self-orthogonal check matrix on `n ≥ 2` qubits by rejection:
/// candidate rows are kept when they commute with every kept row.
pub fn random_stabilizer_code(rng: &mut ChaCha8Rng, n: usize) -> StabilizerCode {
    let target = rng.gen_range(1..n);
    let density = rng.gen_range(0.3..0.8);
    let mut rows: Vec<Vec<Pauli>> = Vec::new();
    let mut attempts = 0;
    while rows.len() < target && attempts < 200 {
        attempts += 1;
        let row: Vec<Pauli> = (0..n)
            .map(|_| if rng.gen_bool(density) { random_pauli(rng) } else { Pauli::I })
            .collect();
        if row.iter().all(|p| p.is_identity()) {
            continue;
        }
        if rows.iter().all(|r| commutes_dense(r, &row)) {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        rows.push(vec![Pauli::Z; n]);
    }
    let rows = rows.iter().map(|r| PauliString::from_paulis(r)).collect();
    StabilizerCode::new(n, rows).expect("rows commute by construction")
}

/// Small instance pool: the five-qubit code half of the time, otherwise a
/// random code on 2..=8 qubits.
pub fn random_small_code(rng: &mut ChaCha8Rng) -> StabilizerCode {
    if rng.gen_bool(0.5) {
        five_qubit_code()
    } else {
        let n = rng.gen_range(2..=8);
        random_stabilizer_code(rng, n)
    }
}

pub fn random_error(rng: &mut ChaCha8Rng, n: usize, epsilon: f64) -> PauliString {
    let e: Vec<Pauli> = (0..n)
        .map(|_| if rng.gen_bool(epsilon) { random_pauli(rng) } else { Pauli::I })
        .collect();
    PauliString::from_paulis(&e)
}

/// Check supports forming a cycle-free Tanner graph on `n` variables: every
/// new check joins variables from pairwise distinct components.
pub fn random_forest_checks(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut checks = Vec::new();
    for _ in 0..rng.gen_range(1..=n) {
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(rng);
        let want = rng.gen_range(1..=n.min(4));
        let mut chosen = Vec::new();
        let mut roots = Vec::new();
        for v in vars {
            if chosen.len() == want {
                break;
            }
            let r = find(&mut parent, v);
            if !roots.contains(&r) {
                roots.push(r);
                chosen.push(v);
            }
        }
        for &r in &roots[1..] {
            let r0 = find(&mut parent, roots[0]);
            parent[r] = r0;
        }
        chosen.sort_unstable();
        checks.push(chosen);
    }
    checks
}

/// Stabilizer code on a cycle-free Tanner graph. Each qubit carries one
/// fixed Pauli in every check touching it, so checks sharing a qubit commute.
pub fn random_tree_code(rng: &mut ChaCha8Rng, n: usize) -> StabilizerCode {
    let local: Vec<Pauli> = (0..n).map(|_| random_pauli(rng)).collect();
    let rows = random_forest_checks(rng, n)
        .into_iter()
        .map(|support| {
            let mut row = vec![Pauli::I; n];
            for q in support {
                row[q] = local[q];
            }
            PauliString::from_paulis(&row)
        })
        .collect();
    StabilizerCode::new(n, rows).expect("tree checks commute")
}

pub fn random_tree_matrix(rng: &mut ChaCha8Rng, n: usize) -> BinaryMatrix {
    BinaryMatrix::from_rows(n, random_forest_checks(rng, n)).expect("valid supports")
}

pub fn random_quaternary_prior(rng: &mut ChaCha8Rng) -> QuaternaryPrior {
    let eps = rng.gen_range(0.02..0.4);
    let w: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.2..1.0));
    let s: f64 = w.iter().sum();
    QuaternaryPrior::new([1.0 - eps, eps * w[0] / s, eps * w[1] / s, eps * w[2] / s]).unwrap()
}

/// `P(E_n = W | syndrome)` for every qubit by enumerating all `4^n` errors.
pub fn brute_force_posterior4(code: &StabilizerCode, z: &Syndrome, priors: &[QuaternaryPrior]) -> Vec<[f64; 4]> {
    let n = code.n();
    let rows = code_rows(code);
    let target: Vec<bool> = (0..z.len()).map(|m| z.get(m)).collect();
    let mut post = vec![[0.0; 4]; n];
    let mut e = vec![Pauli::I; n];
    for idx in 0..4usize.pow(n as u32) {
        for (q, slot) in e.iter_mut().enumerate() {
            *slot = Pauli::ALL[idx >> (2 * q) & 3];
        }
        if dense_syndrome(&rows, &e) != target {
            continue;
        }
        let w: f64 = e.iter().zip(priors).map(|(p, pr)| pr.get(*p)).product();
        for (q, p) in e.iter().enumerate() {
            post[q][p.index()] += w;
        }
    }
    post.into_iter().map(normalize).collect()
}

/// `P(E_n = b | H e = z)` by enumerating all `2^n` bit vectors.
pub fn brute_force_posterior2(h: &BinaryMatrix, z: &Syndrome, priors: &[BinaryPrior]) -> Vec<[f64; 2]> {
    let n = h.num_cols();
    let mut post = vec![[0.0; 2]; n];
    for idx in 0..1usize << n {
        let bit = |q: usize| idx >> q & 1 == 1;
        let ok = (0..h.num_rows()).all(|m| h.row(m).iter().filter(|&&q| bit(q)).count() % 2 == z.get(m) as usize);
        if !ok {
            continue;
        }
        let w: f64 = (0..n).map(|q| if bit(q) { priors[q].p1 } else { priors[q].p0 }).product();
        for (q, slot) in post.iter_mut().enumerate() {
            slot[bit(q) as usize] += w;
        }
    }
    post.into_iter().map(normalize).collect()
}

pub fn normalize<const Q: usize>(v: [f64; Q]) -> [f64; Q] {
    let s: f64 = v.iter().sum();
    v.map(|x| x / s)
}

/// Largest component-wise gap between two normalized distributions, relative
/// to the largest component.
pub fn relative_gap<const Q: usize>(a: &[f64; Q], b: &[f64; Q]) -> f64 {
    let scale = a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

/// Run the scalar-message decoder and the reference decoder on the same
/// input and report the first disagreement.
pub fn compare_with_reference(
    code: &StabilizerCode,
    z: &Syndrome,
    priors: &[QuaternaryPrior],
    schedule: Schedule,
    tol: f64,
) -> Result<usize, String> {
    let cfg = DecoderConfig::new(schedule).with_max_iter(25).with_trace(TraceSelection::All);
    let a = bp4_decode(code, z, priors, &cfg).map_err(|e| e.to_string())?;
    let b = conventional_bp4(code, z, priors, &cfg).map_err(|e| e.to_string())?;
    if a.status != b.status || a.iterations != b.iterations || a.estimate != b.estimate {
        return Err(format!(
            "outputs differ: {:?}/{}/{} vs {:?}/{}/{}",
            a.status, a.iterations, a.estimate, b.status, b.iterations, b.estimate
        ));
    }
    for (ta, tb) in a.trace.unwrap().iter().zip(b.trace.unwrap().iter()) {
        for ((qa, pa), (_, pb)) in ta.marginals.iter().zip(&tb.marginals) {
            let gap = relative_gap(pa, pb);
            if gap > tol {
                return Err(format!("iteration {} qubit {qa}: {pa:?} vs {pb:?}", ta.iteration));
            }
        }
    }
    Ok(a.iterations)
}

/// One oracle instance drawn from `seed`: code, error at one of the three
/// channel rates, and schedule. Returns the iteration count.
pub fn oracle_instance(seed: u64) -> Result<usize, String> {
    let mut rng = rng(seed);
    let code = random_small_code(&mut rng);
    let eps = [0.01, 0.1, 0.3][rng.gen_range(0..3)];
    let schedule = if rng.gen_bool(0.5) { Schedule::Parallel } else { Schedule::Serial };
    let e = random_error(&mut rng, code.n(), eps);
    let z = code.syndrome(&e).unwrap();
    let priors = vec![QuaternaryPrior::depolarizing(eps).unwrap(); code.n()];
    compare_with_reference(&code, &z, &priors, schedule, 1e-9)
        .map_err(|msg| format!("seed {seed} (n={}, eps={eps}, {schedule}): {msg}", code.n()))
}

pub fn tree_instance_bp4(seed: u64, schedule: Schedule) -> Result<f64, String> {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=8);
    let code = random_tree_code(&mut rng, n);
    let priors: Vec<QuaternaryPrior> = (0..n).map(|_| random_quaternary_prior(&mut rng)).collect();
    let e = random_error(&mut rng, n, 0.3);
    let z = code.syndrome(&e).unwrap();
    let cfg = DecoderConfig::new(schedule)
        .with_max_iter(2 * n + 2)
        .with_early_stop(false)
        // The clamp shifts near-certain messages by up to 1e-12, which the
        // normalization can amplify past the comparison tolerance.
        .with_clamp_eps(0.0)
        .with_trace(TraceSelection::All);
    let r = bp4_decode(&code, &z, &priors, &cfg).map_err(|e| e.to_string())?;
    let last = r.trace.unwrap().pop().unwrap();
    let exact = brute_force_posterior4(&code, &z, &priors);
    Ok(last.marginals.iter().map(|(q, p)| relative_gap(p, &exact[*q])).fold(0.0, f64::max))
}

pub fn tree_instance_bp2(seed: u64, schedule: Schedule) -> Result<f64, String> {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=8);
    let h = random_tree_matrix(&mut rng, n);
    let priors: Vec<BinaryPrior> = (0..n).map(|_| BinaryPrior::new(rng.gen_range(0.02..0.45)).unwrap()).collect();
    let e = Bits::from_bools((0..n).map(|_| rng.gen_bool(0.3)));
    let z = Syndrome::new(h.mul_vec(&e).unwrap());
    let cfg = DecoderConfig::new(schedule)
        .with_max_iter(2 * n + 2)
        .with_early_stop(false)
        .with_clamp_eps(0.0)
        .with_trace(TraceSelection::All);
    let r = Bp2Decoder::new(&h, cfg).unwrap().decode(&z, &priors).map_err(|e| e.to_string())?;
    let last = r.trace.unwrap().pop().unwrap();
    let exact = brute_force_posterior2(&h, &z, &priors);
    Ok(last.marginals.iter().map(|(q, p)| relative_gap(p, &exact[*q])).fold(0.0, f64::max))
}

type MessageLog = Vec<(usize, Vec<u64>, Vec<u64>)>;

fn record(log: &mut MessageLog) -> impl FnMut(&MessageView<'_>) + '_ {
    |v: &MessageView<'_>| {
        log.push((
            v.iteration,
            v.d.iter().map(|x| x.to_bits()).collect(),
            v.delta.iter().map(|x| x.to_bits()).collect(),
        ))
    }
}

/// Whether the identity-valued modifiers leave every message of a full run
/// bit-for-bit unchanged, for both decoders and schedules.
pub fn modifier_identity_instance(seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    let code = random_small_code(&mut rng);
    let eps = rng.gen_range(0.01..0.3);
    let e = random_error(&mut rng, code.n(), eps);
    let z = code.syndrome(&e).unwrap();
    let priors = vec![QuaternaryPrior::depolarizing(eps).unwrap(); code.n()];
    let h = code.to_binary_check();
    let bpriors = vec![BinaryPrior::new(2.0 * eps / 3.0).unwrap(); h.num_cols()];
    let identities = [
        Modifier::CheckNormalization(1.0),
        Modifier::VariableNormalization(1.0),
        Modifier::Offset(0.0),
    ];
    for schedule in [Schedule::Parallel, Schedule::Serial] {
        let base = DecoderConfig::new(schedule).with_max_iter(30);
        let run4 = |cfg: DecoderConfig| {
            let mut log = MessageLog::new();
            let r = Bp4Decoder::new(&code, cfg).unwrap().decode_observed(&z, &priors, record(&mut log)).unwrap();
            (r, log)
        };
        let run2 = |cfg: DecoderConfig| {
            let mut log = MessageLog::new();
            let r = Bp2Decoder::new(&h, cfg).unwrap().decode_observed(&z, &bpriors, record(&mut log)).unwrap();
            (r, log)
        };
        let (r4, log4) = run4(base.clone());
        let (r2, log2) = run2(base.clone());
        for m in identities {
            let (m4, mlog4) = run4(base.clone().with_modifier(m));
            if mlog4 != log4 || m4 != r4 {
                return Err(format!("seed {seed}: BP4 {schedule} with {m:?} diverged"));
            }
            let (m2, mlog2) = run2(base.clone().with_modifier(m));
            if mlog2 != log2 || m2 != r2 {
                return Err(format!("seed {seed}: BP2 {schedule} with {m:?} diverged"));
            }
        }
    }
    Ok(())
}

/// Every element of the group generated by the code's rows.
pub fn stabilizer_group(code: &StabilizerCode) -> Vec<PauliString> {
    let mut group = vec![PauliString::identity(code.n())];
    for row in code.rows() {
        let products: Vec<PauliString> = group.iter().map(|g| g.multiply(row).unwrap()).collect();
        for p in products {
            if !group.contains(&p) {
                group.push(p);
            }
        }
    }
    group
}

/// Outcome of a trial derived from first principles.
pub fn reference_outcome(code: &StabilizerCode, actual: &PauliString, estimate: &PauliString, converged: bool) -> Outcome {
    if !converged {
        Outcome::DetectedError
    } else if actual == estimate {
        Outcome::ExactSuccess
    } else if stabilizer_group(code).contains(&actual.multiply(estimate).unwrap()) {
        Outcome::DegenerateSuccess
    } else {
        Outcome::UndetectedError
    }
}

/// Exact failure probability of a deterministic decoder on the five-qubit
/// code, summing the channel probability of every error it fails on.
pub fn five_qubit_exact_failure(cfg: &DecoderConfig, epsilon: f64) -> f64 {
    let code = five_qubit_code();
    let prior = QuaternaryPrior::depolarizing(epsilon).unwrap();
    let priors = vec![prior; 5];
    let mut dec = Bp4Decoder::new(&code, cfg.clone()).unwrap();
    let mut total = 0.0;
    for idx in 0..1024usize {
        let e: Vec<Pauli> = (0..5).map(|q| Pauli::ALL[idx >> (2 * q) & 3]).collect();
        let e = PauliString::from_paulis(&e);
        let r = dec.decode(&code.syndrome(&e).unwrap(), &priors).unwrap();
        if !reference_outcome(&code, &e, &r.estimate, r.is_success()).is_success() {
            total += e.iter().map(|p| prior.get(p)).product::<f64>();
        }
    }
    total
}

fn random_decoder(rng: &mut ChaCha8Rng) -> DecoderSpec {
    let schedule = if rng.gen_bool(0.5) { Schedule::Parallel } else { Schedule::Serial };
    let modifier = match rng.gen_range(0..4) {
        0 => Modifier::None,
        1 => Modifier::CheckNormalization(rng.gen_range(0.8..2.5)),
        2 => Modifier::VariableNormalization(rng.gen_range(0.8..2.5)),
        _ => Modifier::Offset(rng.gen_range(0.0..1.0)),
    };
    let cfg = DecoderConfig::new(schedule).with_max_iter(rng.gen_range(1..40)).with_modifier(modifier);
    if rng.gen_bool(0.5) {
        DecoderSpec::bp4(cfg)
    } else {
        DecoderSpec::bp2(cfg)
    }
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

/// A decoder reporting success has an estimate with the given syndrome.
pub fn property_success_is_consistent(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&any::<u64>(), |seed| {
            let mut rng = rng(seed);
            let code = random_small_code(&mut rng);
            let eps = rng.gen_range(0.0..0.5);
            let e = random_error(&mut rng, code.n(), eps);
            let z = code.syndrome(&e).unwrap();
            let spec = random_decoder(&mut rng);
            let (ok, est) = decode_spec(&code, &z, &spec, 0.1);
            if ok {
                prop_assert_eq!(dense_syndrome(&code_rows(&code), &paulis(&est)), (0..z.len()).map(|m| z.get(m)).collect::<Vec<_>>());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn decode_spec(code: &StabilizerCode, z: &Syndrome, spec: &DecoderSpec, eps: f64) -> (bool, PauliString) {
    match spec.kind {
        qbp_core::DecoderKind::Bp4 => {
            let priors = vec![QuaternaryPrior::depolarizing(eps).unwrap(); code.n()];
            let r = bp4_decode(code, z, &priors, &spec.config).unwrap();
            (r.is_success(), r.estimate)
        }
        qbp_core::DecoderKind::Bp2 => {
            let r = qbp_core::bp2_on_stabilizer(code, z, eps, &spec.config).unwrap();
            (r.is_success(), r.estimate)
        }
    }
}

/// Each trial falls in exactly the bucket a first-principles classification
/// assigns, and simulated bucket counts add up to the trial count.
pub fn property_outcomes_exhaustive(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&any::<u64>(), |seed| {
            let mut rng = rng(seed);
            let code = random_small_code(&mut rng);
            let eps = rng.gen_range(0.0..0.6);
            let e = random_error(&mut rng, code.n(), eps);
            let z = code.syndrome(&e).unwrap();
            let spec = random_decoder(&mut rng);
            let (ok, est) = decode_spec(&code, &z, &spec, 0.1);
            let got = code.classify(&e, &est, ok).unwrap();
            prop_assert_eq!(got, reference_outcome(&code, &e, &est, ok));
            if seed % 64 == 0 {
                let stop = StopRule { min_logical_errors: rng.gen_range(1..20), max_trials: rng.gen_range(1..300) };
                let p = run_point(&code, "t", rng.gen_range(0.0..0.5), &spec, stop, seed, Execution::Sequential).unwrap();
                let sum = p.exact_successes + p.degenerate_successes + p.detected_errors + p.undetected_errors;
                prop_assert_eq!(sum, p.trials);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Multiplying an error by any product of checks leaves its syndrome fixed.
pub fn property_stabilizer_invariance(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&any::<u64>(), |seed| {
            let mut rng = rng(seed);
            let code = random_small_code(&mut rng);
            let eps = rng.gen_range(0.0..0.8);
            let e = random_error(&mut rng, code.n(), eps);
            let mut f = e.clone();
            for row in code.rows() {
                if rng.gen_bool(0.5) {
                    f = f.multiply(row).unwrap();
                }
            }
            prop_assert_eq!(code.syndrome(&e).unwrap(), code.syndrome(&f).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// A point's statistics depend on the seed only, not on the worker count.
pub fn property_worker_independence(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&any::<u64>(), |seed| {
            let mut rng = rng(seed);
            let code = random_small_code(&mut rng);
            let spec = random_decoder(&mut rng);
            let eps = rng.gen_range(0.0..0.4);
            let stop = StopRule { min_logical_errors: rng.gen_range(1..50), max_trials: rng.gen_range(1..1500) };
            let base = run_point(&code, "t", eps, &spec, stop, seed, Execution::Sequential).unwrap();
            #[cfg(feature = "parallel")]
            for threads in [1, 2, 3] {
                let p = run_point(&code, "t", eps, &spec, stop, seed, Execution::Parallel { threads }).unwrap();
                prop_assert_eq!(&p, &base);
            }
            let again = run_point(&code, "t", eps, &spec, stop, seed, Execution::Sequential).unwrap();
            prop_assert_eq!(&again, &base);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
