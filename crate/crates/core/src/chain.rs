//! Product Markov chain over (channel bin, interference bit, protocol
//! state), its stationary distribution and the reward-weighted metrics.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::decode::{decode, gain_thresholds, threshold_indices, DecodeOutcome, LinkBudget, ThresholdEdgePolicy};
use crate::error::{invalid, Error, Result};
use crate::fading::ChannelModel;
use crate::interference::InterferenceModel;
use crate::protocol::{initial_state, step, ProtocolConfig, ProtocolState, RewardIncrement};
use crate::scc::{strongly_connected_components, Csr};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;
pub const DEFAULT_SOLVER_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 200_000;
/// Recurrent classes up to this size are solved directly.
pub const DIRECT_SOLVE_LIMIT: usize = 2000;
const LAZY_MIX: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SystemState {
    /// Channel bin, 1-based.
    pub h_idx: usize,
    pub psi: u8,
    pub phi: ProtocolState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub state_cap: usize,
    pub edge_policy: ThresholdEdgePolicy,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            state_cap: DEFAULT_STATE_CAP,
            edge_policy: ThresholdEdgePolicy::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Chain {
    states: Vec<SystemState>,
    kernel: Csr,
    rewards: Vec<RewardIncrement>,
    recurrent_class: Vec<usize>,
    scc_count: usize,
    thresholds: (usize, usize),
}

impl Chain {
    /// States in breadth-first discovery order from the initial state.
    pub fn states(&self) -> &[SystemState] {
        &self.states
    }
    pub fn len(&self) -> usize {
        self.states.len()
    }
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
    pub fn kernel(&self) -> &Csr {
        &self.kernel
    }
    /// Deterministic per-state `(c_thr, c_tx)`.
    pub fn rewards(&self) -> &[RewardIncrement] {
        &self.rewards
    }
    /// Indices of the unique closed class, ascending.
    pub fn recurrent_class(&self) -> &[usize] {
        &self.recurrent_class
    }
    pub fn scc_count(&self) -> usize {
        self.scc_count
    }
    /// `(h0, h1)` bin thresholds used for decoding.
    pub fn thresholds(&self) -> (usize, usize) {
        self.thresholds
    }

    /// Text dump for differential testing: a header line, then one line
    /// per state `index h psi key_hex delivered transmitted to:prob ...`.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# chain states={} nnz={}", self.len(), self.kernel.nnz())?;
        for (i, s) in self.states.iter().enumerate() {
            let key: String = s.phi.canonical_key().iter().map(|b| format!("{b:02x}")).collect();
            let r = self.rewards[i];
            write!(out, "{i} {} {} {key} {} {}", s.h_idx, s.psi, r.delivered, r.transmitted)?;
            for (j, p) in self.kernel.row(i) {
                write!(out, " {j}:{p:.17e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

const OUTCOMES: usize = 3;

fn outcome_code(d: DecodeOutcome) -> usize {
    match (d.bs_ok, d.cu_ok) {
        (_, false) => 0,
        (false, true) => 1,
        (true, true) => 2,
    }
}

/// Builds the reachable chain with default options.
pub fn build_chain(
    cm: &ChannelModel,
    im: &InterferenceModel,
    lb: &LinkBudget,
    cfg: &ProtocolConfig,
) -> Result<Chain> {
    build_chain_with(cm, im, lb, cfg, &BuildOptions::default())
}

/// Breadth-first construction of the reachable product chain from
/// `(h = 1, psi = 0, empty protocol state)`.
///
/// Decode thresholds come from `lb`; `im` contributes only its transition
/// probabilities.
pub fn build_chain_with(
    cm: &ChannelModel,
    im: &InterferenceModel,
    lb: &LinkBudget,
    cfg: &ProtocolConfig,
    opts: &BuildOptions,
) -> Result<Chain> {
    let q = cm.q();
    let (g0, g1) = gain_thresholds(lb);
    let (h0, h1) = threshold_indices(cm, g0, g1, opts.edge_policy);
    let alpha = cfg.alpha();
    let arrivals = [(false, 1.0 - alpha), (true, alpha)];
    let env = 2 * q;
    let env_index = |h: usize, psi: u8| usize::from(psi) * q + (h - 1);

    // Protocol states are interned; a system state is (protocol id, env).
    let mut protocol_ids: HashMap<ProtocolState, u32> = HashMap::new();
    let mut protocols: Vec<ProtocolState> = Vec::new();
    type Memo = [Option<(u32, RewardIncrement)>; 2];
    let mut memo: Vec<[Memo; OUTCOMES]> = Vec::new();
    let mut index_of: Vec<u32> = Vec::new();

    let mut intern = |phi: ProtocolState,
                      protocols: &mut Vec<ProtocolState>,
                      memo: &mut Vec<[Memo; OUTCOMES]>,
                      index_of: &mut Vec<u32>|
     -> u32 {
        if let Some(&id) = protocol_ids.get(&phi) {
            return id;
        }
        let id = protocols.len() as u32;
        protocol_ids.insert(phi.clone(), id);
        protocols.push(phi);
        memo.push([[None; 2]; OUTCOMES]);
        index_of.extend(std::iter::repeat_n(u32::MAX, env));
        id
    };

    let start = intern(initial_state(cfg), &mut protocols, &mut memo, &mut index_of);
    let mut order: Vec<(u32, usize, u8)> = vec![(start, 1, 0)];
    index_of[start as usize * env + env_index(1, 0)] = 0;

    let mut row_ptr = vec![0usize];
    let mut cols: Vec<u32> = Vec::new();
    let mut vals: Vec<f64> = Vec::new();
    let mut rewards = Vec::new();
    let mut row: Vec<(u32, f64)> = Vec::with_capacity(4 * env);

    let mut cursor = 0;
    while cursor < order.len() {
        let (pid, h, psi) = order[cursor];
        cursor += 1;
        let code = outcome_code(decode(h, psi, h0, h1));
        let outcome = match code {
            0 => DecodeOutcome { bs_ok: false, cu_ok: false },
            1 => DecodeOutcome { bs_ok: false, cu_ok: true },
            _ => DecodeOutcome { bs_ok: true, cu_ok: true },
        };

        let mut successors = [(0u32, RewardIncrement::default()); 2];
        for (slot, &(arrival, _)) in arrivals.iter().enumerate() {
            let cached = memo[pid as usize][code][slot];
            successors[slot] = match cached {
                Some(hit) => hit,
                None => {
                    let (next, reward) = step(&protocols[pid as usize], cfg, outcome, arrival)?;
                    let nid = intern(next, &mut protocols, &mut memo, &mut index_of);
                    memo[pid as usize][code][slot] = Some((nid, reward));
                    (nid, reward)
                }
            };
        }
        if successors[0].1 != successors[1].1 {
            return Err(Error::Invariant(format!(
                "reward of state {} depends on the arrival branch",
                cursor - 1
            )));
        }
        rewards.push(successors[0].1);

        row.clear();
        for (slot, &(_, p_arrival)) in arrivals.iter().enumerate() {
            if p_arrival == 0.0 {
                continue;
            }
            let nid = successors[slot].0;
            for h_next in 1..=q {
                let p_h = cm.p(h, h_next);
                if p_h == 0.0 {
                    continue;
                }
                for psi_next in 0..=1u8 {
                    let p_psi = im.p(psi, psi_next);
                    if p_psi == 0.0 {
                        continue;
                    }
                    let slot_index = nid as usize * env + env_index(h_next, psi_next);
                    let mut target = index_of[slot_index];
                    if target == u32::MAX {
                        if order.len() >= opts.state_cap {
                            return Err(Error::Capacity {
                                cap: opts.state_cap,
                                reached: order.len() + 1,
                            });
                        }
                        target = order.len() as u32;
                        index_of[slot_index] = target;
                        order.push((nid, h_next, psi_next));
                    }
                    row.push((target, p_h * p_psi * p_arrival));
                }
            }
        }
        row.sort_unstable_by_key(|&(c, _)| c);
        let mut k = 0;
        while k < row.len() {
            let c = row[k].0;
            let mut p = 0.0;
            while k < row.len() && row[k].0 == c {
                p += row[k].1;
                k += 1;
            }
            cols.push(c);
            vals.push(p);
        }
        row_ptr.push(cols.len());
    }

    let kernel = Csr::new(row_ptr, cols, vals);
    for i in 0..kernel.rows() {
        let s: f64 = kernel.row(i).map(|(_, p)| p).sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!("kernel row {i} sums to {s}")));
        }
    }

    let sccs = strongly_connected_components(&kernel);
    let bottoms = sccs.bottom_components();
    if bottoms.len() != 1 {
        return Err(Error::Model(format!(
            "{} closed classes reachable from the initial state",
            bottoms.len()
        )));
    }
    let mut recurrent_class = sccs.members(bottoms[0]);
    recurrent_class.sort_unstable();

    let states = order
        .into_iter()
        .map(|(pid, h_idx, psi)| SystemState {
            h_idx,
            psi,
            phi: protocols[pid as usize].clone(),
        })
        .collect();

    Ok(Chain {
        states,
        kernel,
        rewards,
        recurrent_class,
        scc_count: sccs.count(),
        thresholds: (h0, h1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMethod {
    /// Direct solve for small recurrent classes, power iteration otherwise.
    #[default]
    Auto,
    Power,
    Direct,
    /// Run both and require agreement within 1e-10 (L1).
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryResult {
    /// Indexed like the chain's states; zero off the recurrent class.
    pub pi: Vec<f64>,
    /// `||pi P - pi||_1`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub method: SolverMethod,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_SOLVER_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            method: SolverMethod::Auto,
        }
    }
}

pub fn stationary_distribution(chain: &Chain, tol: f64, max_iters: usize) -> Result<StationaryResult> {
    stationary_distribution_with(
        chain,
        &SolverOptions {
            tol,
            max_iters,
            method: SolverMethod::Auto,
        },
    )
}

pub fn stationary_distribution_with(chain: &Chain, opts: &SolverOptions) -> Result<StationaryResult> {
    if !(opts.tol > 0.0) {
        return Err(invalid(format!("solver tolerance must be positive, got {}", opts.tol)));
    }
    let class = chain.recurrent_class();
    let sub = chain.kernel.restrict(class);
    let n = class.len();
    let small = n <= DIRECT_SOLVE_LIMIT;

    let (local, iterations) = match opts.method {
        SolverMethod::Power => power_iteration(&sub, None, opts.tol, opts.max_iters)?,
        SolverMethod::Direct => polish(&sub, gth_solve(&sub), opts)?,
        SolverMethod::Auto if small => polish(&sub, gth_solve(&sub), opts)?,
        SolverMethod::Auto => power_iteration(&sub, None, opts.tol, opts.max_iters)?,
        SolverMethod::Both => {
            let (power, iters) = power_iteration(&sub, None, opts.tol, opts.max_iters)?;
            let (direct, _) = polish(&sub, gth_solve(&sub), opts)?;
            let gap: f64 = power.iter().zip(&direct).map(|(a, b)| (a - b).abs()).sum();
            if gap > 1e-10 {
                return Err(Error::Invariant(format!(
                    "direct and power-iteration solutions differ by {gap:e} (L1)"
                )));
            }
            (direct, iters)
        }
    };

    let residual = residual(&sub, &local);
    let mut pi = vec![0.0; chain.len()];
    for (&state, &p) in class.iter().zip(&local) {
        pi[state] = p;
    }
    Ok(StationaryResult {
        pi,
        residual,
        iterations,
    })
}

fn residual(kernel: &Csr, pi: &[f64]) -> f64 {
    let next = kernel.left_multiply(pi);
    next.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum()
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
}

/// Falls back to power iteration seeded with `pi` if the direct answer
/// misses the tolerance.
fn polish(kernel: &Csr, pi: Vec<f64>, opts: &SolverOptions) -> Result<(Vec<f64>, usize)> {
    if residual(kernel, &pi) <= opts.tol {
        return Ok((pi, 0));
    }
    power_iteration(kernel, Some(pi), opts.tol, opts.max_iters)
}

/// Power iteration on a closed class, run on the lazy walk `(P + I) / 2`.
/// Same fixed point, but periodic and nearly periodic chains (Stop-and-Wait
/// under a long fronthaul delay cycles with period delta + 1) converge fast.
fn power_iteration(
    kernel: &Csr,
    start: Option<Vec<f64>>,
    tol: f64,
    max_iters: usize,
) -> Result<(Vec<f64>, usize)> {
    let n = kernel.rows();
    let lazy = LAZY_MIX;
    let mut pi = start.unwrap_or_else(|| vec![1.0 / n as f64; n]);
    normalize(&mut pi);
    let mut res = f64::INFINITY;
    for it in 0..max_iters {
        let mut next = kernel.left_multiply(&pi);
        res = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        if res <= tol {
            return Ok((pi, it));
        }
        if lazy > 0.0 {
            for (x, p) in next.iter_mut().zip(&pi) {
                *x = (1.0 - lazy) * *x + lazy * p;
            }
        }
        normalize(&mut next);
        pi = next;
    }
    Err(Error::Convergence {
        iterations: max_iters,
        residual: res,
    })
}

/// Grassmann-Taksar-Heyman elimination on the dense kernel of an
/// irreducible class. Subtraction-free, so accurate for stiff chains.
fn gth_solve(kernel: &Csr) -> Vec<f64> {
    let n = kernel.rows();
    if n == 1 {
        return vec![1.0];
    }
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for (j, p) in kernel.row(i) {
            a[i * n + j] = p;
        }
    }
    for k in (1..n).rev() {
        let (head, tail) = a.split_at_mut(k * n);
        let row_k = &tail[..k];
        let s: f64 = row_k.iter().sum();
        for i in 0..k {
            let factor = head[i * n + k];
            if factor == 0.0 {
                continue;
            }
            let factor = factor / s;
            head[i * n + k] = factor;
            let row_i = &mut head[i * n..i * n + k];
            for (x, &y) in row_i.iter_mut().zip(row_k) {
                *x += factor * y;
            }
        }
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for j in 1..n {
        pi[j] = (0..j).map(|i| pi[i] * a[i * n + j]).sum();
    }
    normalize(&mut pi);
    pi
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Delivered packets per slot.
    pub throughput: f64,
    /// Throughput over the fraction of transmitting slots; `None` if the
    /// terminal never transmits.
    pub efficiency: Option<f64>,
    pub tx_fraction: f64,
}

pub fn metrics(chain: &Chain, st: &StationaryResult) -> Metrics {
    let (mut throughput, mut tx_fraction) = (0.0, 0.0);
    for (&p, r) in st.pi.iter().zip(chain.rewards()) {
        throughput += p * f64::from(r.delivered);
        tx_fraction += p * f64::from(r.transmitted);
    }
    let efficiency = (tx_fraction > 0.0).then(|| throughput / tx_fraction);
    Metrics {
        throughput,
        efficiency,
        tx_fraction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::build_fsmc;
    use crate::interference::from_rate_burstiness;
    use crate::protocol::{Architecture, Protocol};

    fn single_chain(kernel: Csr) -> Chain {
        let n = kernel.rows();
        Chain {
            states: (0..n)
                .map(|i| SystemState { h_idx: 1, psi: (i % 2) as u8, phi: ProtocolState::default() })
                .collect(),
            kernel,
            rewards: vec![RewardIncrement::default(); n],
            recurrent_class: (0..n).collect(),
            scc_count: 1,
            thresholds: (0, 0),
        }
    }

    fn dense(rows: &[&[f64]]) -> Csr {
        let mut row_ptr = vec![0];
        let (mut cols, mut vals) = (vec![], vec![]);
        for r in rows {
            for (j, &p) in r.iter().enumerate() {
                if p != 0.0 {
                    cols.push(j as u32);
                    vals.push(p);
                }
            }
            row_ptr.push(cols.len());
        }
        Csr::new(row_ptr, cols, vals)
    }

    #[test]
    fn two_state_interference_kernel() {
        let chain = single_chain(dense(&[&[0.75, 0.25], &[1.0 / 6.0, 5.0 / 6.0]]));
        for method in [SolverMethod::Power, SolverMethod::Direct, SolverMethod::Both] {
            let st = stationary_distribution_with(&chain, &SolverOptions { method, ..Default::default() }).unwrap();
            // error is at most residual / spectral gap (0.25 + 1/6)
            assert!(st.residual <= 1e-12);
            assert!((st.pi[0] - 0.4).abs() < 3e-12 && (st.pi[1] - 0.6).abs() < 3e-12);
        }
    }

    #[test]
    fn absorbing_state() {
        let chain = single_chain(dense(&[&[1.0]]));
        let st = stationary_distribution(&chain, 1e-12, 10).unwrap();
        assert_eq!(st.pi, vec![1.0]);
    }

    #[test]
    fn periodic_doubly_stochastic_cycle_is_uniform() {
        // a pure 3-cycle has no self-loops; the lazy walk must still converge
        let chain = single_chain(dense(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]));
        let st = stationary_distribution_with(
            &chain,
            &SolverOptions { method: SolverMethod::Both, ..Default::default() },
        )
        .unwrap();
        for p in &st.pi {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nearly_periodic_cycle_with_a_self_loop() {
        let n = 11;
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            rows[i][(i + 1) % n] = 1.0;
        }
        rows[0][0] = 1e-3;
        rows[0][1] = 1.0 - 1e-3;
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let chain = single_chain(dense(&refs));
        let st = stationary_distribution_with(
            &chain,
            &SolverOptions { method: SolverMethod::Power, max_iters: 20_000, ..Default::default() },
        )
        .unwrap();
        assert!(st.residual <= 1e-12);
    }

    #[test]
    fn doubly_stochastic_random_kernel_is_uniform() {
        // convex mix of permutation matrices
        let n = 7;
        let mut rows = vec![vec![0.0; n]; n];
        for (w, shift) in [(0.5, 1), (0.3, 3), (0.2, 0)] {
            for i in 0..n {
                rows[i][(i + shift) % n] += w;
            }
        }
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let chain = single_chain(dense(&refs));
        let st = stationary_distribution_with(
            &chain,
            &SolverOptions { method: SolverMethod::Both, ..Default::default() },
        )
        .unwrap();
        for p in &st.pi {
            assert!((p - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let chain = single_chain(dense(&[&[0.999, 0.001], &[0.002, 0.998]]));
        let err = stationary_distribution_with(
            &chain,
            &SolverOptions { tol: 1e-15, max_iters: 3, method: SolverMethod::Power },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Convergence { iterations: 3, .. }));
    }

    fn default_models(q: usize) -> (ChannelModel, InterferenceModel, LinkBudget) {
        let cm = build_fsmc(q, 0.3, 1e-8).unwrap();
        let lb = LinkBudget::from_db(30.0, 1.0, 10.0, 10.0).unwrap();
        let im = from_rate_burstiness(0.6, 6.0, lb.i_power).unwrap();
        (cm, im, lb)
    }

    #[test]
    fn sw_conventional_single_bin_enumeration() {
        let cm = build_fsmc(1, 0.3, 1e-8).unwrap();
        let im = from_rate_burstiness(0.5, 2.0, 0.0).unwrap();
        let lb = LinkBudget::new(1000.0, 1.0, 10.0, 0.0).unwrap();
        let cfg = ProtocolConfig::stop_and_wait(Architecture::Conventional, 1, 1, 0.5).unwrap();
        // a single bin decodes only if the straddling bin counts as success
        let opts = BuildOptions { edge_policy: ThresholdEdgePolicy::Optimistic, ..Default::default() };
        let chain = build_chain_with(&cm, &im, &lb, &cfg, &opts).unwrap();
        assert_eq!(chain.thresholds(), (0, 0));
        assert!(chain.len() <= 4 * 1 * 2);
        let buffers: std::collections::BTreeSet<_> = chain.states().iter().map(|s| s.phi.buffer).collect();
        assert_eq!(buffers.into_iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(chain.states().iter().all(|s| s.phi.window.is_empty()));
    }

    #[test]
    fn gbn_cran_default_size_is_bounded_and_ergodic() {
        let (cm, im, lb) = default_models(8);
        let cfg = ProtocolConfig::new(Protocol::GoBackN, Architecture::Cran, 5, 5, 1, 0.5).unwrap();
        let chain = build_chain(&cm, &im, &lb, &cfg).unwrap();
        assert!(chain.len() < DEFAULT_STATE_CAP);
        assert!(!chain.recurrent_class().is_empty());
        assert_eq!(chain.thresholds(), (1, 6));
    }

    #[test]
    fn state_cap_is_enforced() {
        let (cm, im, lb) = default_models(8);
        let cfg = ProtocolConfig::new(Protocol::SelectiveRepeat, Architecture::Cran, 5, 5, 1, 0.5).unwrap();
        let opts = BuildOptions { state_cap: 50, ..Default::default() };
        match build_chain_with(&cm, &im, &lb, &cfg, &opts) {
            Err(Error::Capacity { cap: 50, reached: 51 }) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn direct_and_power_agree_on_a_protocol_chain() {
        let (cm, im, lb) = default_models(3);
        let cfg = ProtocolConfig::new(Protocol::SelectiveRepeat, Architecture::Hybrid, 2, 2, 1, 0.5).unwrap();
        let chain = build_chain(&cm, &im, &lb, &cfg).unwrap();
        assert!(chain.recurrent_class().len() <= DIRECT_SOLVE_LIMIT);
        let st = stationary_distribution_with(&chain, &SolverOptions { method: SolverMethod::Both, ..Default::default() })
            .unwrap();
        assert!(st.residual <= 1e-12);
        assert!((st.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dump_lists_every_state() {
        let (cm, im, lb) = default_models(2);
        let cfg = ProtocolConfig::stop_and_wait(Architecture::Cran, 2, 1, 0.5).unwrap();
        let chain = build_chain(&cm, &im, &lb, &cfg).unwrap();
        let mut buf = Vec::new();
        chain.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), chain.len() + 1);
        assert!(text.lines().nth(1).unwrap().starts_with("0 1 0 00000000 0 0 "));
    }
}
