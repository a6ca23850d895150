//! Nonlinear SIS dynamics on undirected hypergraphs.
//!
//! A susceptible node in hyperedge `e` is infected through `e` at rate
//! `λ · i_e^ν`, where `i_e` is the number of infected members, and infected
//! nodes recover at rate `μ`. The simulation is an exact Gillespie process:
//! hyperedge `e` fires at rate `m_e · s_e · λ · i_e^ν` (multiplicity times
//! susceptible count times per-node rate) and then infects a uniform
//! susceptible member.

use std::collections::VecDeque;

use rand::Rng as _;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::exec::{self, Execution};
use crate::hypercore::UndirectedHypergraph;
use crate::rng::{self, role, Rng};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SisConfig {
    pub lambda: f64,
    pub nu: f64,
    pub mu: f64,
    /// Initial infected density.
    pub rho0: f64,
    pub burn_in: f64,
    pub sample_count: usize,
    pub decorrelation: f64,
    pub qs_history: usize,
    /// Simulated time between quasi-stationary snapshots.
    pub qs_interval: f64,
    pub seed: u64,
}

impl Default for SisConfig {
    fn default() -> Self {
        SisConfig {
            lambda: 0.0,
            nu: 1.0,
            mu: 1.0,
            rho0: 0.01,
            burn_in: 10_000.0,
            sample_count: 10_000,
            decorrelation: 1.0,
            qs_history: 50,
            qs_interval: 1.0,
            seed: 0,
        }
    }
}

impl SisConfig {
    pub fn validate(&self) -> Result<()> {
        let rates = [self.lambda, self.nu, self.mu, self.burn_in, self.decorrelation];
        if rates.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidArgument("rates and times must be finite and non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.rho0) {
            return Err(Error::InvalidArgument(format!("rho0 must lie in [0, 1], got {}", self.rho0)));
        }
        if self.qs_interval <= 0.0 || !self.qs_interval.is_finite() {
            return Err(Error::InvalidArgument("snapshot interval must be positive".into()));
        }
        Ok(())
    }
}

/// Binary tree of partial sums over leaf rates. Internal nodes are always
/// recomputed from their children, so sums never drift from the leaves.
#[derive(Debug, Clone)]
struct SumTree {
    leaves: usize,
    nodes: Vec<f64>,
}

impl SumTree {
    fn new(n: usize) -> Self {
        let leaves = n.next_power_of_two().max(1);
        SumTree { leaves, nodes: vec![0.0; 2 * leaves] }
    }

    fn total(&self) -> f64 {
        self.nodes[1]
    }

    fn get(&self, i: usize) -> f64 {
        self.nodes[self.leaves + i]
    }

    fn set(&mut self, i: usize, value: f64) {
        let mut k = self.leaves + i;
        self.nodes[k] = value;
        while k > 1 {
            k /= 2;
            self.nodes[k] = self.nodes[2 * k] + self.nodes[2 * k + 1];
        }
    }

    /// Leaf whose cumulative interval contains `x ∈ [0, total)`.
    fn find(&self, mut x: f64) -> usize {
        let mut k = 1;
        while k < self.leaves {
            let left = self.nodes[2 * k];
            if x < left || self.nodes[2 * k + 1] == 0.0 {
                k *= 2;
            } else {
                x -= left;
                k = 2 * k + 1;
            }
        }
        k - self.leaves
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    Recovery(u32),
    /// Node infected through hyperedge.
    Infection {
        node: u32,
        edge: usize,
    },
}

/// Infection state with per-hyperedge counters and rates.
#[derive(Debug, Clone)]
pub struct SisState<'a> {
    graph: &'a UndirectedHypergraph,
    incidence: Vec<Vec<usize>>,
    infected: Vec<bool>,
    infected_list: Vec<u32>,
    position: Vec<usize>,
    i_e: Vec<u32>,
    s_e: Vec<u32>,
    rates: SumTree,
    beta: Vec<f64>,
    mu: f64,
    pub clock: f64,
}

impl<'a> SisState<'a> {
    pub fn new(graph: &'a UndirectedHypergraph, lambda: f64, nu: f64, mu: f64) -> Self {
        let n = graph.node_count();
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in graph.edges().iter().enumerate() {
            for &v in &e.members {
                incidence[v as usize].push(i);
            }
        }
        let beta =
            (0..=graph.max_edge_size()).map(|i| if i == 0 { 0.0 } else { lambda * (i as f64).powf(nu) }).collect();
        SisState {
            graph,
            incidence,
            infected: vec![false; n],
            infected_list: Vec::new(),
            position: vec![usize::MAX; n],
            i_e: vec![0; graph.edges().len()],
            s_e: graph.edges().iter().map(|e| e.members.len() as u32).collect(),
            rates: SumTree::new(graph.edges().len()),
            beta,
            mu,
            clock: 0.0,
        }
    }

    pub fn infected_count(&self) -> usize {
        self.infected_list.len()
    }

    pub fn density(&self) -> f64 {
        if self.infected.is_empty() {
            0.0
        } else {
            self.infected_count() as f64 / self.infected.len() as f64
        }
    }

    pub fn is_infected(&self, v: u32) -> bool {
        self.infected[v as usize]
    }

    pub fn infected_nodes(&self) -> &[u32] {
        &self.infected_list
    }

    pub fn counts(&self, edge: usize) -> (u32, u32) {
        (self.i_e[edge], self.s_e[edge])
    }

    pub fn edge_rate(&self, edge: usize) -> f64 {
        self.rates.get(edge)
    }

    pub fn total_rate(&self) -> f64 {
        self.mu * self.infected_count() as f64 + self.rates.total()
    }

    fn rate_of(&self, edge: usize) -> f64 {
        let m = self.graph.edges()[edge].multiplicity as f64;
        m * self.s_e[edge] as f64 * self.beta[self.i_e[edge] as usize]
    }

    fn set_infected(&mut self, v: u32, on: bool) {
        if self.infected[v as usize] == on {
            return;
        }
        self.infected[v as usize] = on;
        if on {
            self.position[v as usize] = self.infected_list.len();
            self.infected_list.push(v);
        } else {
            let p = self.position[v as usize];
            self.infected_list.swap_remove(p);
            if let Some(&moved) = self.infected_list.get(p) {
                self.position[moved as usize] = p;
            }
            self.position[v as usize] = usize::MAX;
        }
        for k in 0..self.incidence[v as usize].len() {
            let e = self.incidence[v as usize][k];
            if on {
                self.i_e[e] += 1;
                self.s_e[e] -= 1;
            } else {
                self.i_e[e] -= 1;
                self.s_e[e] += 1;
            }
            let r = self.rate_of(e);
            self.rates.set(e, r);
        }
    }

    /// Replaces the infected set.
    pub fn reset(&mut self, infected: &[u32]) {
        for v in self.infected_list.clone() {
            self.set_infected(v, false);
        }
        for &v in infected {
            self.set_infected(v, true);
        }
    }

    /// Draws the next event without applying it; `None` when the total
    /// rate is zero.
    pub fn choose_event(&self, rng: &mut Rng) -> Option<Event> {
        let recovery = self.mu * self.infected_count() as f64;
        let total = recovery + self.rates.total();
        if total <= 0.0 {
            return None;
        }
        let x = rng.random::<f64>() * total;
        if x < recovery || self.rates.total() == 0.0 {
            let i = rng.random_range(0..self.infected_count());
            return Some(Event::Recovery(self.infected_list[i]));
        }
        let edge = self.rates.find((x - recovery).min(self.rates.total() * (1.0 - f64::EPSILON)));
        let k = rng.random_range(0..self.s_e[edge]);
        let node = self.graph.edges()[edge]
            .members
            .iter()
            .copied()
            .filter(|&v| !self.infected[v as usize])
            .nth(k as usize)
            .expect("s_e counts susceptible members");
        Some(Event::Infection { node, edge })
    }

    pub fn apply(&mut self, event: Event) {
        match event {
            Event::Recovery(v) => self.set_infected(v, false),
            Event::Infection { node, .. } => self.set_infected(node, true),
        }
    }

    /// Advances the clock by an exponential waiting time and applies one
    /// event. `None` in an absorbing state.
    pub fn gillespie_step(&mut self, rng: &mut Rng) -> Option<Event> {
        let total = self.total_rate();
        let ev = self.choose_event(rng)?;
        self.clock += exponential(rng, total);
        self.apply(ev);
        Some(ev)
    }

    /// Recounts everything from the infected set.
    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.graph.edges().iter().enumerate() {
            let inf = e.members.iter().filter(|&&v| self.infected[v as usize]).count() as u32;
            if inf != self.i_e[i] || self.i_e[i] + self.s_e[i] != e.members.len() as u32 {
                return Err(Error::Invariant(format!("hyperedge {i}: counters out of sync")));
            }
            if self.rates.get(i) != self.rate_of(i) {
                return Err(Error::Invariant(format!("hyperedge {i}: stale rate")));
            }
        }
        let listed = self.infected_list.len();
        if listed != self.infected.iter().filter(|&&b| b).count()
            || self.infected_list.iter().enumerate().any(|(p, &v)| self.position[v as usize] != p)
        {
            return Err(Error::Invariant("infected list out of sync".into()));
        }
        let sum: f64 = (0..self.graph.edges().len()).map(|i| self.rates.get(i)).sum();
        if (sum - self.rates.total()).abs() > 1e-9 * sum.max(1.0) {
            return Err(Error::Invariant("rate tree total differs from leaf sum".into()));
        }
        Ok(())
    }
}

fn exponential(rng: &mut Rng, rate: f64) -> f64 {
    -(1.0 - rng.random::<f64>()).ln() / rate
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ordinary,
    QuasiStationary,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ordinary => "ordinary",
            Method::QuasiStationary => "qs",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordinary" => Ok(Method::Ordinary),
            "qs" => Ok(Method::QuasiStationary),
            _ => Err(Error::InvalidArgument(format!("unknown method '{s}' (ordinary|qs)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationary {
    pub mean: f64,
    pub std: f64,
    /// The ordinary run hit the absorbing state.
    pub absorbed: bool,
}

struct Simulation<'a> {
    state: SisState<'a>,
    rng: Rng,
    cfg: &'a SisConfig,
    method: Method,
    history: VecDeque<Vec<u32>>,
    next_snapshot: f64,
}

impl<'a> Simulation<'a> {
    fn new(h: &'a UndirectedHypergraph, cfg: &'a SisConfig, method: Method, rng: Rng) -> Self {
        let mut sim = Simulation {
            state: SisState::new(h, cfg.lambda, cfg.nu, cfg.mu),
            rng,
            cfg,
            method,
            history: VecDeque::with_capacity(cfg.qs_history),
            next_snapshot: cfg.qs_interval,
        };
        sim.seed_initial();
        sim
    }

    fn seed_initial(&mut self) {
        let n = self.state.infected.len();
        let k = ((self.cfg.rho0 * n as f64).ceil() as usize).min(n);
        let picks: Vec<u32> = rand::seq::index::sample(&mut self.rng, n, k).into_iter().map(|v| v as u32).collect();
        self.state.reset(&picks);
    }

    fn restore(&mut self) {
        if self.history.is_empty() {
            self.seed_initial();
        } else {
            let i = self.rng.random_range(0..self.history.len());
            let snap = self.history[i].clone();
            self.state.reset(&snap);
        }
    }

    /// Runs until the clock reaches `target`. Returns false if an ordinary
    /// run is absorbed.
    fn advance_to(&mut self, target: f64) -> bool {
        loop {
            if self.state.infected_count() == 0 {
                match self.method {
                    Method::Ordinary => {
                        self.state.clock = target;
                        return false;
                    }
                    Method::QuasiStationary => self.restore(),
                }
            }
            let total = self.state.total_rate();
            let next = if total > 0.0 { self.state.clock + exponential(&mut self.rng, total) } else { f64::INFINITY };
            if self.method == Method::QuasiStationary && self.cfg.qs_history > 0 {
                while self.next_snapshot <= next.min(target) {
                    if self.history.len() == self.cfg.qs_history {
                        self.history.pop_front();
                    }
                    self.history.push_back(self.state.infected_list.clone());
                    self.next_snapshot += self.cfg.qs_interval;
                }
            }
            if next > target {
                self.state.clock = target;
                return true;
            }
            let ev = self.state.choose_event(&mut self.rng).expect("positive total rate");
            self.state.apply(ev);
            self.state.clock = next;
        }
    }

    fn run(mut self) -> Stationary {
        let absorbed = Stationary { mean: 0.0, std: 0.0, absorbed: true };
        if !self.advance_to(self.cfg.burn_in) {
            return absorbed;
        }
        let mut values = Vec::with_capacity(self.cfg.sample_count);
        for k in 1..=self.cfg.sample_count {
            if !self.advance_to(self.cfg.burn_in + k as f64 * self.cfg.decorrelation) {
                return absorbed;
            }
            values.push(self.state.density());
        }
        if values.is_empty() {
            return Stationary { mean: self.state.density(), std: 0.0, absorbed: false };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
        Stationary { mean, std, absorbed: false }
    }
}

fn simulate(h: &UndirectedHypergraph, cfg: &SisConfig, method: Method, index: u64) -> Result<Stationary> {
    cfg.validate()?;
    if method == Method::QuasiStationary && cfg.qs_history == 0 {
        return Err(Error::InvalidArgument("quasi-stationary runs need a history of at least 1".into()));
    }
    let rng = Rng::seed_from_u64(rng::derive_seed(cfg.seed, role::CONTAGION, index));
    Ok(Simulation::new(h, cfg, method, rng).run())
}

/// Mean and standard deviation of the infected density sampled after the
/// burn-in; `(0, 0)` with `absorbed` set if the process dies out.
pub fn run_stationary(h: &UndirectedHypergraph, cfg: &SisConfig) -> Result<Stationary> {
    simulate(h, cfg, Method::Ordinary, 0)
}

/// As [`run_stationary`], but absorption is replaced by a random recent
/// state.
pub fn run_quasi_stationary(h: &UndirectedHypergraph, cfg: &SisConfig) -> Result<Stationary> {
    simulate(h, cfg, Method::QuasiStationary, 0)
}

/// Independent run `index` of a replicate batch.
pub fn run_replicate(h: &UndirectedHypergraph, cfg: &SisConfig, method: Method, index: u64) -> Result<Stationary> {
    simulate(h, cfg, method, index)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub scaled: Option<f64>,
    pub mean: f64,
    pub std: f64,
    pub method: Method,
    pub absorbed: bool,
}

/// One run per grid point, each on its own random stream.
pub fn phase_sweep(
    h: &UndirectedHypergraph,
    grid: &[f64],
    cfg: &SisConfig,
    method: Method,
    lambda_c: Option<f64>,
    execution: Execution,
) -> Result<Vec<SweepPoint>> {
    exec::try_map_indexed(execution, grid.len(), |i| {
        let point = SisConfig { lambda: grid[i], ..cfg.clone() };
        let r = simulate(h, &point, method, i as u64)?;
        Ok(SweepPoint {
            lambda: grid[i],
            scaled: lambda_c.map(|c| grid[i] / c),
            mean: r.mean,
            std: r.std,
            method,
            absorbed: r.absorbed,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::parse_undirected;
    use approx::assert_abs_diff_eq;

    fn short(lambda: f64) -> SisConfig {
        SisConfig { lambda, burn_in: 50.0, sample_count: 200, ..SisConfig::default() }
    }

    #[test]
    fn sum_tree_samples_by_weight() {
        let mut t = SumTree::new(5);
        for (i, w) in [1.0, 0.0, 2.0, 3.0, 0.5].iter().enumerate() {
            t.set(i, *w);
        }
        assert_eq!(t.total(), 6.5);
        assert_eq!(t.find(0.5), 0);
        assert_eq!(t.find(1.0), 2);
        assert_eq!(t.find(2.99), 2);
        assert_eq!(t.find(3.0), 3);
        assert_eq!(t.find(6.4), 4);
    }

    #[test]
    fn pair_infection_rate_is_lambda() {
        let h = parse_undirected("1,2\n").unwrap();
        let mut s = SisState::new(&h, 0.3, 1.0, 1.0);
        s.reset(&[0]);
        assert_eq!(s.counts(0), (1, 1));
        assert_abs_diff_eq!(s.edge_rate(0), 0.3);
        s.reset(&[0, 1]);
        assert_eq!(s.edge_rate(0), 0.0);
        s.validate().unwrap();
    }

    #[test]
    fn event_frequencies_match_rates() {
        // Nodes 1..3; node 1 infected. Edges {1,2} (twice) and {1,2,3}.
        let h = parse_undirected("1,2\n1,2\n1,2,3\n").unwrap();
        let (lambda, nu, mu) = (0.7, 1.5, 1.0);
        let mut s = SisState::new(&h, lambda, nu, mu);
        s.reset(&[0]);
        let pair = 2.0 * lambda;
        let triple = 2.0 * lambda;
        let total = mu + pair + triple;
        let mut rng = Rng::seed_from_u64(42);
        let draws = 1_000_000;
        let (mut rec, mut via_pair, mut via_triple, mut node3) = (0, 0, 0, 0);
        for _ in 0..draws {
            match s.choose_event(&mut rng).unwrap() {
                Event::Recovery(v) => {
                    assert_eq!(v, 0);
                    rec += 1
                }
                Event::Infection { node, edge } => {
                    if edge == 0 {
                        via_pair += 1;
                    } else {
                        via_triple += 1;
                        node3 += (node == 2) as u32;
                    }
                }
            }
        }
        let f = |c: u32| c as f64 / draws as f64;
        assert_abs_diff_eq!(f(rec), mu / total, epsilon = 3e-3);
        assert_abs_diff_eq!(f(via_pair), pair / total, epsilon = 3e-3);
        assert_abs_diff_eq!(f(via_triple), triple / total, epsilon = 3e-3);
        assert_abs_diff_eq!(node3 as f64 / via_triple as f64, 0.5, epsilon = 3e-3);
        // Two infected members scale the per-node rate by 2^ν.
        s.reset(&[0, 1]);
        assert_abs_diff_eq!(s.edge_rate(1), lambda * 2f64.powf(nu), epsilon = 1e-12);
    }

    #[test]
    fn conservation_along_a_run() {
        let mut rng = Rng::seed_from_u64(1);
        let u = crate::synth::contact_surrogate(&mut rng);
        let mut s = SisState::new(&u, 0.2, 2.0, 1.0);
        s.reset(&[0, 5, 9, 40]);
        for step in 0..20_000 {
            if s.gillespie_step(&mut rng).is_none() {
                break;
            }
            if step % 997 == 0 {
                s.validate().unwrap();
            }
        }
        s.validate().unwrap();
    }

    #[test]
    fn zero_lambda_absorbs() {
        let h = parse_undirected("1,2\n2,3\n3,4\n").unwrap();
        let cfg = SisConfig { rho0: 1.0, ..short(0.0) };
        let r = run_stationary(&h, &cfg).unwrap();
        assert_eq!((r.mean, r.std, r.absorbed), (0.0, 0.0, true));
        let sweep = phase_sweep(&h, &[0.0], &cfg, Method::Ordinary, Some(0.05), Execution::Sequential).unwrap();
        assert_eq!((sweep[0].mean, sweep[0].scaled), (0.0, Some(0.0)));
        let qs = run_quasi_stationary(&h, &cfg).unwrap();
        assert!(!qs.absorbed && qs.mean > 0.0 && qs.mean <= 1.0);
    }

    #[test]
    fn no_recovery_stays_infected() {
        let h = parse_undirected("1,2\n2,3\n").unwrap();
        let cfg = SisConfig { mu: 0.0, rho0: 1.0, ..short(1.0) };
        let r = run_stationary(&h, &cfg).unwrap();
        assert_eq!((r.mean, r.std, r.absorbed), (1.0, 0.0, false));
    }

    #[test]
    fn qs_agrees_with_ordinary_when_endemic() {
        let h = parse_undirected("1,2,3\n2,3,4\n3,4,5\n4,5,1\n5,1,2\n1,3\n2,4\n").unwrap();
        let cfg = SisConfig { rho0: 0.4, burn_in: 100.0, sample_count: 2000, ..short(2.0) };
        let o = run_stationary(&h, &cfg).unwrap();
        let q = run_quasi_stationary(&h, &cfg).unwrap();
        assert!(!o.absorbed);
        assert!((o.mean - q.mean).abs() <= 2.0 * o.std.max(q.std));
    }

    #[test]
    fn deterministic_and_validated() {
        let h = parse_undirected("1,2\n2,3\n1,3\n").unwrap();
        let cfg = short(1.5);
        assert_eq!(run_stationary(&h, &cfg).unwrap(), run_stationary(&h, &cfg).unwrap());
        assert!(run_stationary(&h, &SisConfig { rho0: 2.0, ..cfg.clone() }).is_err());
        assert!(run_quasi_stationary(&h, &SisConfig { qs_history: 0, ..cfg }).is_err());
    }
}
