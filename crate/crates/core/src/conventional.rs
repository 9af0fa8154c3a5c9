//! Reference quaternary BP passing full 4-vector messages.
//!
//! Kept as an independent check on [`crate::bp4`]: check nodes marginalize
//! over all local error configurations consistent with the syndrome bit, and
//! variable nodes multiply 4-vectors componentwise. No clamping or message
//! modifiers are applied.

use crate::code::{StabilizerCode, Syndrome};
use crate::config::{DecoderConfig, Modifier, Schedule, TraceSelection};
use crate::bp4::{Bp4Result, QuaternaryPrior};
use crate::engine::{IterationMarginals, UpdateCount};
use crate::error::{check_len, Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::result::{DecodeResult, Status};

/// Largest check degree accepted by the reference decoder.
pub const ORACLE_MAX_DEGREE: usize = 16;

/// Check-to-variable 4-vector `r_mn^W` for the edge at position `target` of a
/// check with edge Paulis `paulis`, incoming 4-vectors `q`, and syndrome bit
/// `z`: the total weight of local configurations with `E_n = W` whose
/// commutation parity with the check equals `z`.
///
/// Accumulates the distribution of the parity contributed by the other
/// edges one edge at a time.
pub fn check_to_variable(paulis: &[Pauli], q: &[[f64; 4]], target: usize, z: bool) -> [f64; 4] {
    // parity[b] = mass of partial configurations with parity b
    let mut parity = [1.0, 0.0];
    for (i, (&s, qi)) in paulis.iter().zip(q).enumerate() {
        if i == target {
            continue;
        }
        let mut next = [0.0, 0.0];
        for w in Pauli::ALL {
            let bit = w.inner(s) as usize;
            next[0] += parity[bit] * qi[w.index()];
            next[1] += parity[1 - bit] * qi[w.index()];
        }
        parity = next;
    }
    Pauli::ALL.map(|w| parity[(z ^ w.inner(paulis[target])) as usize])
}

/// The same quantity by enumerating every configuration of the check's
/// qubits. Exponential in the degree; for cross-checking only.
pub fn check_to_variable_brute_force(paulis: &[Pauli], q: &[[f64; 4]], target: usize, z: bool) -> [f64; 4] {
    let k = paulis.len();
    let mut r = [0.0; 4];
    for code in 0..4usize.pow(k as u32) {
        let config: Vec<Pauli> = (0..k).map(|i| Pauli::ALL[code / 4usize.pow(i as u32) % 4]).collect();
        let parity = config.iter().zip(paulis).fold(false, |acc, (e, s)| acc ^ e.inner(*s));
        if parity != z {
            continue;
        }
        let weight: f64 = (0..k).filter(|&i| i != target).map(|i| q[i][config[i].index()]).product();
        r[config[target].index()] += weight;
    }
    r
}

struct Edges {
    /// Per check: edge ids in check order.
    check: Vec<Vec<usize>>,
    /// Per variable: edge ids in ascending check order.
    var: Vec<Vec<usize>>,
    edge_pauli: Vec<Pauli>,
}

fn edges(code: &StabilizerCode) -> Edges {
    let mut check = Vec::with_capacity(code.m());
    let mut var = vec![Vec::new(); code.n()];
    let mut edge_pauli = Vec::new();
    for m in 0..code.m() {
        let mut ids = Vec::new();
        for &(q, s) in code.check_neighbors(m) {
            ids.push(edge_pauli.len());
            var[q].push(edge_pauli.len());
            edge_pauli.push(s);
        }
        check.push(ids);
    }
    Edges { check, var, edge_pauli }
}

/// Conventional quaternary BP. Only `schedule`, `max_iter`, `early_stop` and
/// `trace` of the configuration are used; modifiers are rejected.
pub fn conventional_bp4(
    code: &StabilizerCode,
    z: &Syndrome,
    priors: &[QuaternaryPrior],
    cfg: &DecoderConfig,
) -> Result<Bp4Result> {
    cfg.validate()?;
    check_len(code.m(), z.len())?;
    check_len(code.n(), priors.len())?;
    if cfg.modifier != Modifier::None {
        return Err(Error::InvalidConfig("reference decoder has no message modifiers".into()));
    }
    for m in 0..code.m() {
        let degree = code.check_neighbors(m).len();
        if degree > ORACLE_MAX_DEGREE {
            return Err(Error::DegreeTooLarge { check: m, degree, limit: ORACLE_MAX_DEGREE });
        }
    }

    let g = edges(code);
    let p: Vec<[f64; 4]> = priors.iter().map(|x| x.p).collect();
    let n = code.n();
    let edge_var: Vec<usize> = {
        let mut v = vec![0; g.edge_pauli.len()];
        for (q, ids) in g.var.iter().enumerate() {
            for &e in ids {
                v[e] = q;
            }
        }
        v
    };

    let mut q_msg: Vec<[f64; 4]> = edge_var.iter().map(|&v| p[v]).collect();
    let mut r_msg: Vec<[f64; 4]> = vec![[1.0; 4]; g.edge_pauli.len()];
    let mut beliefs = vec![[0.0; 4]; n];
    let mut estimate = PauliString::identity(n);
    let mut trace = (cfg.trace != TraceSelection::Off).then(Vec::new);
    let mut updates = UpdateCount::default();
    let mut converged = false;
    let mut iterations = 0;

    let horizontal = |edge: usize, check: usize, q_msg: &[[f64; 4]]| {
        let ids = &g.check[check];
        let paulis: Vec<Pauli> = ids.iter().map(|&e| g.edge_pauli[e]).collect();
        let q: Vec<[f64; 4]> = ids.iter().map(|&e| q_msg[e]).collect();
        let target = ids.iter().position(|&e| e == edge).expect("edge belongs to check");
        check_to_variable(&paulis, &q, target, z.get(check))
    };
    let edge_check: Vec<usize> = {
        let mut c = vec![0; g.edge_pauli.len()];
        for (m, ids) in g.check.iter().enumerate() {
            for &e in ids {
                c[e] = m;
            }
        }
        c
    };

    // Vertical step and hard decision for one variable.
    let vertical = |v: usize, r_msg: &[[f64; 4]], q_msg: &mut [[f64; 4]], beliefs: &mut [[f64; 4]]| {
        for &e in &g.var[v] {
            let mut q = p[v];
            for &other in &g.var[v] {
                if other != e {
                    for w in 0..4 {
                        q[w] *= r_msg[other][w];
                    }
                }
            }
            let s: f64 = q.iter().sum();
            q_msg[e] = if s > 0.0 { q.map(|x| x / s) } else { [0.25; 4] };
        }
        let mut b = p[v];
        for &e in &g.var[v] {
            for w in 0..4 {
                b[w] *= r_msg[e][w];
            }
        }
        beliefs[v] = b;
    };

    for it in 1..=cfg.max_iter {
        iterations = it;
        match cfg.schedule {
            Schedule::Parallel => {
                for (m, ids) in g.check.iter().enumerate() {
                    for &e in ids {
                        r_msg[e] = horizontal(e, m, &q_msg);
                        updates.check_to_var += 1;
                    }
                }
                for v in 0..n {
                    vertical(v, &r_msg, &mut q_msg, &mut beliefs);
                    updates.var_to_check += g.var[v].len() as u64;
                }
            }
            Schedule::Serial => {
                for v in 0..n {
                    for &e in &g.var[v] {
                        r_msg[e] = horizontal(e, edge_check[e], &q_msg);
                        updates.check_to_var += 1;
                    }
                    vertical(v, &r_msg, &mut q_msg, &mut beliefs);
                    updates.var_to_check += g.var[v].len() as u64;
                }
            }
        }
        for (v, b) in beliefs.iter().enumerate() {
            let mut best = 0;
            for w in 1..4 {
                if b[w] > b[best] {
                    best = w;
                }
            }
            estimate.set(v, Pauli::ALL[best]);
        }
        converged = code.syndrome(&estimate)? == *z;
        if let Some(trace) = trace.as_mut() {
            let normalize = |b: [f64; 4]| {
                let s: f64 = b.iter().sum();
                if s > 0.0 { b.map(|x| x / s) } else { [0.25; 4] }
            };
            let marginals = match &cfg.trace {
                TraceSelection::Off => Vec::new(),
                TraceSelection::All => (0..n).map(|v| (v, normalize(beliefs[v]))).collect(),
                TraceSelection::Only(vs) => vs.iter().filter(|&&v| v < n).map(|&v| (v, normalize(beliefs[v]))).collect(),
            };
            trace.push(IterationMarginals { iteration: it, marginals });
        }
        if converged && cfg.early_stop {
            break;
        }
    }

    Ok(DecodeResult {
        status: if converged { Status::Success } else { Status::Fail },
        estimate,
        iterations,
        trace,
        updates,
    })
}
