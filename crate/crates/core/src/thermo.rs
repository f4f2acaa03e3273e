//! Thermodynamic formalism made exact on subshifts of finite type: closed
//! orbits are cycles of a finite directed multigraph, potentials are
//! edge-valued, pressure is the log of a Perron eigenvalue, and the pressure
//! form is a second derivative of pressure along potential families.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed multigraph edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
}

/// A strongly connected, aperiodic directed multigraph: the desk-scale model
/// of a transitive Anosov flow. Aperiodicity (gcd of cycle lengths = 1) is
/// checked by brute force over simple cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovShift {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    /// outgoing edge positions per vertex
    out: Vec<Vec<usize>>,
}

/// Edge potential, indexed by edge position in `MarkovShift::edges`.
pub type EdgeFunction = Vec<f64>;

/// A closed edge path (positions chained head-to-tail, last head = first tail).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub edge_ids: Vec<usize>,
}

impl MarkovShift {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertices == 0 || edges.is_empty() {
            return Err(Error::InvalidShift("need vertices and edges".into()));
        }
        let mut ids = std::collections::HashSet::new();
        for e in &edges {
            if e.tail >= vertices || e.head >= vertices {
                return Err(Error::InvalidShift(format!(
                    "edge {} endpoints out of range",
                    e.id
                )));
            }
            if !ids.insert(e.id) {
                return Err(Error::InvalidShift(format!("duplicate edge id {}", e.id)));
            }
        }
        let mut out = vec![Vec::new(); vertices];
        for (pos, e) in edges.iter().enumerate() {
            out[e.tail].push(pos);
        }
        let shift = Self {
            vertices,
            edges,
            out,
        };
        if !shift.strongly_connected() {
            return Err(Error::InvalidShift("not strongly connected".into()));
        }
        let cycles = shift.simple_cycles();
        let gcd = cycles
            .iter()
            .map(|c| c.edge_ids.len())
            .fold(0usize, gcd_usize);
        if gcd != 1 {
            return Err(Error::InvalidShift(format!(
                "periodic: gcd of cycle lengths = {gcd}"
            )));
        }
        Ok(shift)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn position_of_id(&self, id: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    fn strongly_connected(&self) -> bool {
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; self.vertices];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for e in &self.edges {
                    let (from, to) = if forward {
                        (e.tail, e.head)
                    } else {
                        (e.head, e.tail)
                    };
                    if from == v && !seen[to] {
                        seen[to] = true;
                        count += 1;
                        stack.push(to);
                    }
                }
            }
            count
        };
        reach(true) == self.vertices && reach(false) == self.vertices
    }

    /// All simple cycles (distinct intermediate vertices), as edge id lists.
    pub fn simple_cycles(&self) -> Vec<Cycle> {
        let mut cycles = Vec::new();
        for start in 0..self.vertices {
            let mut visited = vec![false; self.vertices];
            let mut path: Vec<usize> = Vec::new();
            self.simple_cycle_dfs(start, start, &mut visited, &mut path, &mut cycles);
        }
        cycles
    }

    fn simple_cycle_dfs(
        &self,
        start: usize,
        v: usize,
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        cycles: &mut Vec<Cycle>,
    ) {
        for &pos in &self.out[v] {
            let e = &self.edges[pos];
            if e.head == start {
                let mut ids: Vec<usize> = path.iter().map(|&p| self.edges[p].id).collect();
                ids.push(e.id);
                cycles.push(Cycle { edge_ids: ids });
            } else if e.head > start && !visited[e.head] {
                // restrict to cycles whose minimal vertex is `start`
                visited[e.head] = true;
                path.push(pos);
                self.simple_cycle_dfs(start, e.head, visited, path, cycles);
                path.pop();
                visited[e.head] = false;
            }
        }
    }

    /// Transfer matrix M_{uv} = sum over edges u -> v of e^{g(e)}.
    pub fn transfer_matrix(&self, g: &EdgeFunction) -> DMatrix<f64> {
        let n = self.vertices;
        let mut m = DMatrix::zeros(n, n);
        for (pos, e) in self.edges.iter().enumerate() {
            m[(e.tail, e.head)] += g[pos].exp();
        }
        m
    }
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if a == 0 {
        b
    } else {
        gcd_usize(b % a, a)
    }
}

const POWER_MAX_ITER: usize = 100_000;

/// Topological pressure: log of the Perron eigenvalue of the transfer matrix,
/// by power iteration from the all-ones vector.
pub fn pressure(shift: &MarkovShift, g: &EdgeFunction) -> Result<f64> {
    if g.len() != shift.edge_count() {
        return Err(Error::InvalidInput("potential length mismatch".into()));
    }
    let m = shift.transfer_matrix(g);
    let n = shift.vertices;
    let mut v = nalgebra::DVector::from_element(n, 1.0);
    let mut lambda = 0.0f64;
    let mut converged = false;
    let mut iter = 0;
    while iter < POWER_MAX_ITER {
        let w = &m * &v;
        let norm = w.iter().map(|x| x.abs()).sum::<f64>();
        let new_lambda = norm / v.iter().map(|x| x.abs()).sum::<f64>();
        v = w / norm;
        if (new_lambda - lambda).abs() <= 1e-15 * new_lambda {
            lambda = new_lambda;
            converged = true;
            break;
        }
        lambda = new_lambda;
        iter += 1;
    }
    if !converged {
        // accept if we are within the documented 1e-13 relative tolerance
        let w = &m * &v;
        let check = w.iter().map(|x| x.abs()).sum::<f64>() / v.iter().map(|x| x.abs()).sum::<f64>();
        if (check - lambda).abs() > 1e-13 * check {
            return Err(Error::NonConvergence {
                iterations: POWER_MAX_ITER,
            });
        }
        lambda = check;
    }
    Ok(lambda.ln())
}

/// The unique h >= 0 with P(-h f) = 0 for a positive roof function f, found
/// by bisection; P(-h f) is strictly decreasing in h.
pub fn entropy_root(shift: &MarkovShift, f: &EdgeFunction) -> Result<f64> {
    let min_f = f.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_f <= 0.0 {
        return Err(Error::InvalidInput("roof function must be positive".into()));
    }
    let scaled = |h: f64| -> EdgeFunction { f.iter().map(|x| -h * x).collect() };
    let p0 = pressure(shift, &scaled(0.0))?;
    if p0 <= 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0f64;
    let mut hi = p0 / min_f;
    let mut p_hi = pressure(shift, &scaled(hi))?;
    let mut guard = 0;
    while p_hi > 0.0 && guard < 60 {
        hi *= 1.0 + 1e-12;
        hi += 1e-15;
        p_hi = pressure(shift, &scaled(hi))?;
        guard += 1;
    }
    if p_hi > 0.0 {
        hi = p0 / min_f + 1.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if pressure(shift, &scaled(mid))? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * (1.0 + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All closed edge paths up to rotation with length <= max_len, with their
/// g-periods (sums of g along the cycle). Powers of shorter cycles appear as
/// their own cyclic sequences.
pub fn cycle_periods(
    shift: &MarkovShift,
    g: &EdgeFunction,
    max_len: usize,
) -> Result<Vec<(Cycle, f64)>> {
    if max_len > 14 {
        return Err(Error::InvalidInput(format!("max_len {max_len} > 14")));
    }
    let mut out = Vec::new();
    enumerate_cycles(shift, CycleBound::Length(max_len), usize::MAX, g, &mut |walk,
                                                                              period| {
        out.push((
            Cycle {
                edge_ids: walk.iter().map(|&p| shift.edges[p].id).collect(),
            },
            period,
        ));
        true
    })?;
    Ok(out)
}

enum CycleBound {
    Length(usize),
    Period(f64),
}

/// Enumerate rotation-canonical closed walks; calls `visit(walk, g-period)`.
/// Canonical means the edge-position sequence is the minimal rotation and the
/// first position is the minimum. Returns Err(Overflow) past `budget` visits.
fn enumerate_cycles(
    shift: &MarkovShift,
    bound: CycleBound,
    budget: usize,
    g: &EdgeFunction,
    visit: &mut impl FnMut(&[usize], f64) -> bool,
) -> Result<()> {
    let m = shift.edge_count();
    let mut count = 0usize;
    let mut walk: Vec<usize> = Vec::new();
    for first in 0..m {
        walk.push(first);
        cycle_dfs(
            shift,
            &bound,
            budget,
            g,
            first,
            g[first],
            &mut walk,
            &mut count,
            visit,
        )?;
        walk.pop();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    shift: &MarkovShift,
    bound: &CycleBound,
    budget: usize,
    g: &EdgeFunction,
    first: usize,
    partial: f64,
    walk: &mut Vec<usize>,
    count: &mut usize,
    visit: &mut impl FnMut(&[usize], f64) -> bool,
) -> Result<()> {
    let last = *walk.last().unwrap();
    let closes = shift.edges[last].head == shift.edges[first].tail;
    if closes && is_minimal_rotation(walk) {
        *count += 1;
        if *count > budget {
            return Err(Error::Overflow { budget });
        }
        visit(walk, partial);
    }
    let extend_ok = match bound {
        CycleBound::Length(n) => walk.len() < *n,
        CycleBound::Period(_) => true,
    };
    if !extend_ok {
        return Ok(());
    }
    let v = shift.edges[last].head;
    for &pos in &shift.out[v] {
        if pos < first {
            continue; // the first position must be minimal in the walk
        }
        let next_partial = partial + g[pos];
        if let CycleBound::Period(t) = bound {
            if next_partial > *t {
                continue; // positive roof: extensions only grow the period
            }
        }
        walk.push(pos);
        cycle_dfs(
            shift, bound, budget, g, first, next_partial, walk, count, visit,
        )?;
        walk.pop();
    }
    Ok(())
}

fn is_minimal_rotation(walk: &[usize]) -> bool {
    let n = walk.len();
    for s in 1..n {
        let rotated = (0..n).map(|i| walk[(s + i) % n]);
        if rotated.lt(walk.iter().copied()) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceEntropy {
    /// log N(T) / T, the direct truncation of the growth limit
    pub raw: f64,
    /// corrected for the e^{hT}/(hT) orbit-growth prefactor: solves
    /// u - log u = log N(T), h = u / T
    pub value: f64,
    pub cycles: usize,
    pub horizon: f64,
}

/// Count cycles with period <= T and convert the count into an entropy
/// estimate. The plain quotient log N(T)/T carries a -log(hT)/T bias at
/// desk-scale horizons, so the reported value inverts N(T) = e^{hT}/(hT).
pub fn brute_force_entropy(
    shift: &MarkovShift,
    f: &EdgeFunction,
    t_max: f64,
    budget: usize,
) -> Result<BruteForceEntropy> {
    let min_f = f.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_f <= 0.0 {
        return Err(Error::InvalidInput("roof function must be positive".into()));
    }
    let mut n = 0usize;
    enumerate_cycles(shift, CycleBound::Period(t_max), budget, f, &mut |_, _| {
        n += 1;
        true
    })?;
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "only {n} cycles with period <= {t_max}"
        )));
    }
    let log_n = (n as f64).ln();
    // fixed point of u = log N + log u, convergent since 1/u < 1 here
    let mut u = log_n.max(1.5);
    for _ in 0..100 {
        let next = log_n + u.ln();
        if (next - u).abs() < 1e-14 {
            u = next;
            break;
        }
        u = next;
    }
    Ok(BruteForceEntropy {
        raw: log_n / t_max,
        value: u / t_max,
        cycles: n,
        horizon: t_max,
    })
}

/// Finite-difference steps for the pressure form (with Richardson combination).
const PF_STEP: f64 = 1e-2;
const PF_FIRST_STEP: f64 = 1e-4;

/// The pressure form ||g||^2 at a potential F on {P = 0}:
/// Var(g) / D with Var(g) = d^2/dt^2 P(F + t g)|_0 and
/// D = -d/ds P(F + s F)|_0 > 0.
///
/// The denominator is taken along F itself: for directions tangent to
/// {P = 0} the first derivative d/dt P(F + t g)|_0 vanishes, so the ratio
/// printed with that denominator is 0/0; -dP(F + sF)/ds = -integral of F
/// against the equilibrium state is the standard positive normalizer.
pub fn pressure_form(shift: &MarkovShift, f_base: &EdgeFunction, g: &EdgeFunction) -> Result<f64> {
    let p0 = pressure(shift, f_base)?;
    if p0.abs() > 1e-9 {
        return Err(Error::NotOnPressureZero { pressure: p0 });
    }
    let combine = |t: f64, dir: &EdgeFunction| -> EdgeFunction {
        f_base
            .iter()
            .zip(dir)
            .map(|(a, b)| a + t * b)
            .collect()
    };
    // tangency precondition
    let d1 = (pressure(shift, &combine(PF_FIRST_STEP, g))?
        - pressure(shift, &combine(-PF_FIRST_STEP, g))?)
        / (2.0 * PF_FIRST_STEP);
    if d1.abs() > 1e-6 {
        return Err(Error::NotTangent { derivative: d1 });
    }
    // second derivative with Richardson combination of steps h, h/2
    let second = |h: f64| -> Result<f64> {
        Ok(
            (pressure(shift, &combine(h, g))? - 2.0 * p0 + pressure(shift, &combine(-h, g))?)
                / (h * h),
        )
    };
    let dh = second(PF_STEP)?;
    let dh2 = second(PF_STEP / 2.0)?;
    let var = (4.0 * dh2 - dh) / 3.0;
    // denominator along F
    let dp_f = (pressure(shift, &combine(PF_FIRST_STEP, f_base))?
        - pressure(shift, &combine(-PF_FIRST_STEP, f_base))?)
        / (2.0 * PF_FIRST_STEP);
    let denom = -dp_f;
    if denom <= 0.0 {
        return Err(Error::NotTangent { derivative: dp_f });
    }
    Ok(var / denom)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoboundaryWitness {
    /// vertex potential u with g(e) = u(head) - u(tail) on every edge
    Potential(Vec<f64>),
    /// a directed cycle whose g-period violates the tolerance
    ViolatingCycle(Cycle, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoboundaryReport {
    pub is_coboundary: bool,
    pub witness: CoboundaryWitness,
}

/// Decide whether g is a coboundary u(head) - u(tail): solve u on a spanning
/// tree (traversed in both directions) and check every edge.
pub fn is_coboundary(shift: &MarkovShift, g: &EdgeFunction, tol: f64) -> Result<CoboundaryReport> {
    if g.len() != shift.edge_count() {
        return Err(Error::InvalidInput("potential length mismatch".into()));
    }
    let n = shift.vertices;
    let mut u = vec![f64::NAN; n];
    u[0] = 0.0;
    let mut frontier = vec![0usize];
    while let Some(v) = frontier.pop() {
        for (pos, e) in shift.edges.iter().enumerate() {
            if e.tail == v && u[e.head].is_nan() {
                u[e.head] = u[v] + g[pos];
                frontier.push(e.head);
            } else if e.head == v && u[e.tail].is_nan() {
                u[e.tail] = u[v] - g[pos];
                frontier.push(e.tail);
            }
        }
    }
    let defect = |pos: usize| -> f64 {
        let e = &shift.edges[pos];
        g[pos] - (u[e.head] - u[e.tail])
    };
    let ok = (0..shift.edge_count()).all(|p| defect(p).abs() <= tol);
    if ok {
        return Ok(CoboundaryReport {
            is_coboundary: true,
            witness: CoboundaryWitness::Potential(u),
        });
    }
    // find the simple cycle with the largest |period|
    let mut worst: Option<(Cycle, f64)> = None;
    for c in shift.simple_cycles() {
        let period: f64 = c
            .edge_ids
            .iter()
            .map(|&id| g[shift.position_of_id(id).unwrap()])
            .sum();
        if worst.as_ref().map_or(true, |(_, p)| period.abs() > p.abs()) {
            worst = Some((c, period));
        }
    }
    let (cycle, period) = worst.expect("strongly connected graphs have cycles");
    Ok(CoboundaryReport {
        is_coboundary: false,
        witness: CoboundaryWitness::ViolatingCycle(cycle, period),
    })
}

/// The full shift on two symbols: one vertex, two loops.
pub fn full_two_shift() -> MarkovShift {
    MarkovShift::new(
        1,
        vec![
            Edge {
                id: 0,
                tail: 0,
                head: 0,
            },
            Edge {
                id: 1,
                tail: 0,
                head: 0,
            },
        ],
    )
    .expect("full 2-shift is valid")
}

/// Seeded random strongly connected aperiodic shift on 3-4 vertices with a
/// few chords and a loop; used by the randomized suites.
pub fn random_shift(rng: &mut impl rand::Rng) -> MarkovShift {
    loop {
        let n = rng.gen_range(3..=4usize);
        let mut edges = Vec::new();
        let mut id = 0;
        for v in 0..n {
            edges.push(Edge {
                id,
                tail: v,
                head: (v + 1) % n,
            });
            id += 1;
        }
        edges.push(Edge {
            id,
            tail: rng.gen_range(0..n),
            head: rng.gen_range(0..n),
        });
        id += 1;
        let extra = rng.gen_range(1..=2);
        for _ in 0..extra {
            edges.push(Edge {
                id,
                tail: rng.gen_range(0..n),
                head: rng.gen_range(0..n),
            });
            id += 1;
        }
        if let Ok(shift) = MarkovShift::new(n, edges) {
            return shift;
        }
    }
}

/// Random roof function with values in [0.5, 2].
pub fn random_roof(shift: &MarkovShift, rng: &mut impl rand::Rng) -> EdgeFunction {
    (0..shift.edge_count())
        .map(|_| rng.gen_range(0.5..2.0))
        .collect()
}

/// Project a direction onto the tangent space of {P = 0} at F by removing a
/// multiple of F (first derivatives by central differences).
pub fn tangent_projection(
    shift: &MarkovShift,
    f_base: &EdgeFunction,
    g: &EdgeFunction,
) -> Result<EdgeFunction> {
    let combine = |t: f64, dir: &EdgeFunction| -> EdgeFunction {
        f_base.iter().zip(dir).map(|(a, b)| a + t * b).collect()
    };
    let d_g = (pressure(shift, &combine(PF_FIRST_STEP, g))?
        - pressure(shift, &combine(-PF_FIRST_STEP, g))?)
        / (2.0 * PF_FIRST_STEP);
    let d_f = (pressure(shift, &combine(PF_FIRST_STEP, f_base))?
        - pressure(shift, &combine(-PF_FIRST_STEP, f_base))?)
        / (2.0 * PF_FIRST_STEP);
    let c = d_g / d_f;
    Ok(g.iter().zip(f_base).map(|(x, f)| x - c * f).collect())
}

/// Structured-text document describing a shift and an optional potential.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<BTreeMap<String, f64>>,
}

impl GraphFile {
    pub fn into_shift(self) -> Result<(MarkovShift, Option<EdgeFunction>)> {
        let shift = MarkovShift::new(self.vertices, self.edges)?;
        let potential = match self.potential {
            None => None,
            Some(map) => {
                let mut values = vec![0.0; shift.edge_count()];
                for (key, val) in map {
                    let id: usize = key
                        .parse()
                        .map_err(|_| Error::Format(format!("bad edge id key {key:?}")))?;
                    let pos = shift
                        .position_of_id(id)
                        .ok_or_else(|| Error::Format(format!("unknown edge id {id}")))?;
                    values[pos] = val;
                }
                Some(values)
            }
        };
        Ok((shift, potential))
    }
}

pub fn read_graph(path: &Path) -> Result<(MarkovShift, Option<EdgeFunction>)> {
    let text = std::fs::read_to_string(path)?;
    let doc: GraphFile =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("parse {path:?}: {e}")))?;
    doc.into_shift()
}

pub fn write_graph(
    shift: &MarkovShift,
    potential: Option<&EdgeFunction>,
    path: &Path,
) -> Result<()> {
    let doc = GraphFile {
        vertices: shift.vertices,
        edges: shift.edges.clone(),
        potential: potential.map(|p| {
            shift
                .edges
                .iter()
                .zip(p)
                .map(|(e, v)| (e.id.to_string(), *v))
                .collect()
        }),
    };
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Format(format!("serialize graph: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}
