//! Scalar-message belief propagation over a Tanner graph.
//!
//! Both the binary and the quaternary decoder pass a single real number per
//! edge in each direction: `d = q⁽⁰⁾ − q⁽¹⁾` from variable to check and
//! `δ = (−1)^z Π d` from check to variable. They differ only in how a
//! candidate value `W` of a variable interacts with an edge: `W` either
//! satisfies the edge's local relation with even parity (picks `r⁽⁰⁾`) or odd
//! parity (picks `r⁽¹⁾`). Each edge stores that choice as a bitmask over the
//! `Q` candidate values.
//!
//! For binary BP (`Q = 2`) value 1 is odd on every edge. For quaternary BP
//! (`Q = 4`, values `I, X, Y, Z`) the odd values on edge `(m, n)` are the
//! Paulis anticommuting with `S_mn`.

use crate::bits::Bits;
use crate::config::{DecoderConfig, Modifier, Schedule, TraceSelection};

/// Edge-list Tanner graph in check-major order.
#[derive(Clone, Debug)]
pub(crate) struct Graph {
    n: usize,
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    edge_check: Vec<usize>,
    edge_odd: Vec<u8>,
    var_start: Vec<usize>,
    var_edges: Vec<usize>,
}

impl Graph {
    /// `checks[m]` lists `(variable, odd-value mask)` for each edge of check `m`.
    pub(crate) fn new(n: usize, checks: &[Vec<(usize, u8)>]) -> Self {
        let mut check_start = Vec::with_capacity(checks.len() + 1);
        let mut edge_var = Vec::new();
        let mut edge_check = Vec::new();
        let mut edge_odd = Vec::new();
        let mut var_lists = vec![Vec::new(); n];
        check_start.push(0);
        for (m, edges) in checks.iter().enumerate() {
            for &(v, odd) in edges {
                var_lists[v].push(edge_var.len());
                edge_var.push(v);
                edge_check.push(m);
                edge_odd.push(odd);
            }
            check_start.push(edge_var.len());
        }
        let mut var_start = Vec::with_capacity(n + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_start.push(0);
        for list in var_lists {
            var_edges.extend(list);
            var_start.push(var_edges.len());
        }
        Graph {
            n,
            check_start,
            edge_var,
            edge_check,
            edge_odd,
            var_start,
            var_edges,
        }
    }

    pub(crate) fn num_vars(&self) -> usize {
        self.n
    }

    pub(crate) fn num_checks(&self) -> usize {
        self.check_start.len() - 1
    }

    pub(crate) fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    fn check_edges(&self, m: usize) -> std::ops::Range<usize> {
        self.check_start[m]..self.check_start[m + 1]
    }

    fn var_edges(&self, n: usize) -> &[usize] {
        &self.var_edges[self.var_start[n]..self.var_start[n + 1]]
    }

    /// Whether the hard decisions `values` reproduce `syndrome`.
    fn satisfies(&self, values: &[u8], syndrome: &Bits) -> bool {
        (0..self.num_checks()).all(|m| {
            let parity = self
                .check_edges(m)
                .fold(false, |acc, e| acc ^ (self.edge_odd[e] >> values[self.edge_var[e]] & 1 == 1));
            parity == syndrome.get(m)
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UpdateCount {
    /// `δ` messages computed.
    pub check_to_var: u64,
    /// `d` messages computed.
    pub var_to_check: u64,
}

/// Normalized per-variable beliefs after one iteration's hard decision.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationMarginals<const Q: usize> {
    pub iteration: usize,
    /// `(variable, normalized beliefs)` for each traced variable.
    pub marginals: Vec<(usize, [f64; Q])>,
}

/// Read-only view of the edge messages, handed to observers after every
/// iteration. Edges are in check-major order.
#[derive(Debug)]
pub struct MessageView<'a> {
    pub iteration: usize,
    pub d: &'a [f64],
    pub delta: &'a [f64],
}

pub(crate) struct RawOutcome<const Q: usize> {
    pub converged: bool,
    pub values: Vec<u8>,
    pub iterations: usize,
    pub trace: Option<Vec<IterationMarginals<Q>>>,
    pub updates: UpdateCount,
}

/// `(r⁽⁰⁾, r⁽¹⁾)` from `δ`, with the check-side modifier, clamping and
/// renormalization applied.
#[inline]
pub(crate) fn check_message(delta: f64, modifier: Modifier, clamp_eps: f64) -> (f64, f64) {
    let mut r0 = (1.0 + delta) / 2.0;
    let mut r1 = (1.0 - delta) / 2.0;
    match modifier {
        Modifier::CheckNormalization(alpha) => {
            let e = 1.0 / alpha;
            r0 = r0.powf(e);
            r1 = r1.powf(e);
        }
        Modifier::Offset(beta) => {
            let t = beta.exp();
            if r0 / r1 > t {
                r0 /= t;
            } else if r1 / r0 > t {
                r1 /= t;
            } else {
                r0 = 0.5;
                r1 = 0.5;
            }
        }
        Modifier::None | Modifier::VariableNormalization(_) => {}
    }
    if clamp_eps > 0.0 {
        r0 = r0.clamp(clamp_eps, 1.0 - clamp_eps);
        r1 = r1.clamp(clamp_eps, 1.0 - clamp_eps);
    }
    let s = r0 + r1;
    (r0 / s, r1 / s)
}

/// `d = q⁽⁰⁾ − q⁽¹⁾` after the variable-side modifier and normalization.
#[inline]
pub(crate) fn variable_message(mut q0: f64, mut q1: f64, modifier: Modifier) -> f64 {
    if let Modifier::VariableNormalization(alpha) = modifier {
        let e = 1.0 / alpha;
        q0 = q0.powf(e);
        q1 = q1.powf(e);
    }
    let s = q0 + q1;
    if !(s > 0.0 && s.is_finite()) {
        // Both reset to 1/2.
        return 0.0;
    }
    q0 / s - q1 / s
}

#[derive(Clone, Debug)]
pub(crate) struct Engine<const Q: usize> {
    graph: Graph,
    d: Vec<f64>,
    delta: Vec<f64>,
    r0: Vec<f64>,
    r1: Vec<f64>,
    values: Vec<u8>,
    beliefs: Vec<[f64; Q]>,
    prefix: Vec<[f64; Q]>,
    /// On equal beliefs pick the highest-index value instead of the lowest.
    tie_to_last: bool,
}

impl<const Q: usize> Engine<Q> {
    pub(crate) fn new(graph: Graph, tie_to_last: bool) -> Self {
        let e = graph.num_edges();
        let n = graph.num_vars();
        Engine {
            graph,
            d: vec![0.0; e],
            delta: vec![0.0; e],
            r0: vec![0.5; e],
            r1: vec![0.5; e],
            values: vec![0; n],
            beliefs: vec![[0.0; Q]; n],
            prefix: Vec::new(),
            tie_to_last,
        }
    }

    pub(crate) fn graph(&self) -> &Graph {
        &self.graph
    }

    fn initialize(&mut self, priors: &[[f64; Q]]) {
        for (n, p) in priors.iter().enumerate() {
            for &e in self.graph.var_edges(n) {
                let odd = self.graph.edge_odd[e];
                let (mut q0, mut q1) = (0.0, 0.0);
                for (w, &pw) in p.iter().enumerate() {
                    if odd >> w & 1 == 1 {
                        q1 += pw;
                    } else {
                        q0 += pw;
                    }
                }
                self.d[e] = q0 - q1;
            }
        }
    }

    /// Horizontal step for every edge of check `m`, by prefix/suffix products.
    fn update_check(&mut self, m: usize, negate: bool) {
        let range = self.graph.check_edges(m);
        let mut acc = 1.0;
        for e in range.clone() {
            self.delta[e] = acc;
            acc *= self.d[e];
        }
        let sign = if negate { -1.0 } else { 1.0 };
        let mut acc = 1.0;
        for e in range.rev() {
            self.delta[e] *= acc * sign;
            acc *= self.d[e];
        }
    }

    /// `δ` for one edge from the current `d` of the other edges in its check.
    fn edge_delta(&self, e: usize, negate: bool) -> f64 {
        let range = self.graph.check_edges(self.graph.edge_check[e]);
        let before = self.d[range.start..e].iter().fold(1.0, |acc, &x| acc * x);
        let prod = self.d[e + 1..range.end].iter().fold(before, |acc, &x| acc * x);
        if negate {
            -prod
        } else {
            prod
        }
    }

    /// Vertical step and hard decision for variable `n`.
    fn update_variable(&mut self, n: usize, prior: &[f64; Q], cfg: &DecoderConfig) {
        let start = self.graph.var_start[n];
        let end = self.graph.var_start[n + 1];
        let k = end - start;
        for i in start..end {
            let e = self.graph.var_edges[i];
            let (r0, r1) = check_message(self.delta[e], cfg.modifier, cfg.clamp_eps);
            self.r0[e] = r0;
            self.r1[e] = r1;
        }

        // prefix[j][w] = p^w · Π_{i<j} r_i^{parity(w, i)}
        self.prefix.clear();
        self.prefix.push(*prior);
        for i in start..end {
            let e = self.graph.var_edges[i];
            let odd = self.graph.edge_odd[e];
            let r = [self.r0[e], self.r1[e]];
            let mut next = *self.prefix.last().expect("seeded with the prior");
            for (w, v) in next.iter_mut().enumerate() {
                *v *= r[(odd >> w & 1) as usize];
            }
            self.prefix.push(next);
        }
        let full = self.prefix[k];

        let mut suffix = [1.0; Q];
        for j in (0..k).rev() {
            let e = self.graph.var_edges[start + j];
            let odd = self.graph.edge_odd[e];
            let r = [self.r0[e], self.r1[e]];
            let mut q = [0.0, 0.0];
            for w in 0..Q {
                q[(odd >> w & 1) as usize] += self.prefix[j][w] * suffix[w];
            }
            self.d[e] = variable_message(q[0], q[1], cfg.modifier);
            for (w, s) in suffix.iter_mut().enumerate() {
                *s *= r[(odd >> w & 1) as usize];
            }
        }

        let mut best = 0;
        for w in 1..Q {
            if full[w] > full[best] || (self.tie_to_last && full[w] == full[best]) {
                best = w;
            }
        }
        self.values[n] = best as u8;
        self.beliefs[n] = full;
    }

    fn snapshot(&self, iteration: usize, selection: &TraceSelection) -> IterationMarginals<Q> {
        let normalize = |b: [f64; Q]| {
            let s: f64 = b.iter().sum();
            if s > 0.0 && s.is_finite() {
                b.map(|x| x / s)
            } else {
                [1.0 / Q as f64; Q]
            }
        };
        let marginals = match selection {
            TraceSelection::Off => Vec::new(),
            TraceSelection::All => (0..self.graph.n).map(|n| (n, normalize(self.beliefs[n]))).collect(),
            TraceSelection::Only(vars) => vars
                .iter()
                .filter(|&&n| n < self.graph.n)
                .map(|&n| (n, normalize(self.beliefs[n])))
                .collect(),
        };
        IterationMarginals { iteration, marginals }
    }

    /// Run the decoder. `priors` and `syndrome` must already be validated
    /// against the graph dimensions.
    pub(crate) fn run(
        &mut self,
        syndrome: &Bits,
        priors: &[[f64; Q]],
        cfg: &DecoderConfig,
        observer: &mut dyn FnMut(&MessageView<'_>),
    ) -> RawOutcome<Q> {
        debug_assert_eq!(syndrome.len(), self.graph.num_checks());
        debug_assert_eq!(priors.len(), self.graph.n);
        self.initialize(priors);
        let tracing = cfg.trace != TraceSelection::Off;
        let mut trace = tracing.then(Vec::new);
        let mut updates = UpdateCount::default();
        let mut converged = false;
        let mut iterations = 0;

        for it in 1..=cfg.max_iter {
            iterations = it;
            match cfg.schedule {
                Schedule::Parallel => {
                    for m in 0..self.graph.num_checks() {
                        self.update_check(m, syndrome.get(m));
                    }
                    updates.check_to_var += self.graph.num_edges() as u64;
                    for (n, prior) in priors.iter().enumerate() {
                        self.update_variable(n, prior, cfg);
                    }
                    updates.var_to_check += self.graph.num_edges() as u64;
                }
                Schedule::Serial => {
                    for (n, prior) in priors.iter().enumerate() {
                        for i in self.graph.var_start[n]..self.graph.var_start[n + 1] {
                            let e = self.graph.var_edges[i];
                            let m = self.graph.edge_check[e];
                            self.delta[e] = self.edge_delta(e, syndrome.get(m));
                        }
                        let k = self.graph.var_edges(n).len() as u64;
                        updates.check_to_var += k;
                        self.update_variable(n, prior, cfg);
                        updates.var_to_check += k;
                    }
                }
            }
            converged = self.graph.satisfies(&self.values, syndrome);
            if let Some(trace) = trace.as_mut() {
                trace.push(self.snapshot(it, &cfg.trace));
            }
            observer(&MessageView {
                iteration: it,
                d: &self.d,
                delta: &self.delta,
            });
            if converged && cfg.early_stop {
                break;
            }
        }

        RawOutcome {
            converged,
            values: self.values.clone(),
            iterations,
            trace,
            updates,
        }
    }
}
