//! Seeded numerical checks of the logical-entropy propositions.
//!
//! Every trial draws from a generator keyed by `(seed, proposition, dim, trial)`,
//! so a trial can be rerun on its own with [`reproduce_trial`] and results do
//! not depend on how rayon schedules the work.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{
    apply_channel, interaction_blocks, povm_unital_implementation, prop6_bounds, purify,
    twirl_subsystem, UnitalChannel,
};
use crate::classical::{count_distinct_pairs, distribution_logical_entropy, ProbabilityVector};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, majorization_gap, Matrix, C64};
use crate::quantum::{
    conditional_states, logical_divergence, logical_divergence_forms, logical_entropy,
    outcome_probabilities, pvm_logical_entropy, relative_logical_entropy, DensityMatrix, Pvm,
};
use crate::rng::{keyed, KeyedRng, Stream};
use crate::sampling::{
    random_bipartite, random_composition, random_density, random_density_any_rank, random_povm,
    random_pvm, random_state_vector, random_unitary, random_unitary_mixture, random_weights,
};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Tolerance for checks whose exact value is known in closed form.
pub const EXACT_TOL: f64 = 1e-12;
/// Minimum violation for a strong-subadditivity witness to count.
pub const SSA_MIN_VIOLATION: f64 = 1e-6;
/// Failure records kept per result; the count is always complete.
pub const MAX_FAILURE_RECORDS: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub trials: u64,
    pub dims: Vec<usize>,
    pub tolerance: f64,
}

impl SamplerConfig {
    pub fn new(seed: u64, trials: u64, dims: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(seed, trials, dims, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(seed: u64, trials: u64, dims: Vec<usize>, tolerance: f64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidArgument(format!("dims must be non-empty and each >= 2, got {dims:?}")));
        }
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance must be finite and >= 0, got {tolerance}")));
        }
        Ok(Self { seed, trials, dims, tolerance })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropositionId {
    P1a,
    P1b,
    P1c,
    P1d,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    P10,
    P11,
    P12,
}

impl PropositionId {
    pub const ALL: [PropositionId; 15] = [
        Self::P1a,
        Self::P1b,
        Self::P1c,
        Self::P1d,
        Self::P2,
        Self::P3,
        Self::P4,
        Self::P5,
        Self::P6,
        Self::P7,
        Self::P8,
        Self::P9,
        Self::P10,
        Self::P11,
        Self::P12,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::P1a => "1a",
            Self::P1b => "1b",
            Self::P1c => "1c",
            Self::P1d => "1d",
            Self::P2 => "2",
            Self::P3 => "3",
            Self::P4 => "4",
            Self::P5 => "5",
            Self::P6 => "6",
            Self::P7 => "7",
            Self::P8 => "8",
            Self::P9 => "9",
            Self::P10 => "10",
            Self::P11 => "11",
            Self::P12 => "12",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::P1a => "L(rho) >= 0, zero on pure states",
            Self::P1b => "L(rho) <= 1 - 1/d, attained by I/d",
            Self::P1c => "pure rho_AB has L(rho_A) = L(rho_B)",
            Self::P1d => "L(rho_A x rho_B) = L_A + L_B - L_A L_B",
            Self::P2 => "subadditivity L_AB <= L_A + L_B",
            Self::P3 => "firm subadditivity L_AB <= L_A + sum_k p_k L(rho_B^k)",
            Self::P4 => "|L_A - L_B| <= L_AB",
            Self::P5 => "unital channels do not decrease L; output spectrum majorized by input",
            Self::P6 => "interaction-block bounds on L(rho'_S)",
            Self::P7 => "L(rho) <= L(p) + sum_k p_k^2 L(rho_k), equality for orthogonal supports",
            Self::P8 => "d(rho||sigma) >= 0",
            Self::P9 => "mean entropy neighborhood (strict inequalities tested non-strictly)",
            Self::P10 => "joint convexity of d",
            Self::P11 => "concavity of L(A/B)",
            Self::P12 => "monotonicity of d under tracing out B",
        }
    }

    fn stream(self) -> Stream {
        Stream::Proposition(self as u16)
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PropositionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.label() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown proposition {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Violated,
    CounterexampleFoundAsExpected,
    NoCounterexampleFound,
}

/// One evaluated check: `margin > tolerance` (or NaN) counts as a failure.
/// Inequalities `lhs <= rhs` use `lhs - rhs`; equalities use `|lhs - rhs|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub margin: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn failed(&self) -> bool {
        !(self.margin <= self.tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub evaluated: u64,
    pub failures: u64,
    /// Largest margin seen; negative means every instance held with room to spare.
    pub worst_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub dim: usize,
    pub trial: u64,
    pub check: &'static str,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SsaWitness {
    pub trial: u64,
    pub dims: [usize; 3],
    pub violation: f64,
    pub reverified_violation: f64,
    pub l_abc: f64,
    pub l_ab: f64,
    pub l_bc: f64,
    pub l_b: f64,
    /// Row-major `[re, im]` entries.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropositionResult {
    pub id: String,
    pub description: &'static str,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub tolerance: f64,
    pub failure_count: u64,
    /// Largest margin over all checks and trials.
    pub worst_violation: f64,
    pub checks: Vec<CheckSummary>,
    /// First failures in `(dim, trial)` order.
    pub failures: Vec<FailureRecord>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SsaWitness>,
}

struct Checks {
    tol: f64,
    out: Vec<CheckOutcome>,
}

impl Checks {
    fn new(tol: f64) -> Self {
        Self { tol, out: Vec::new() }
    }

    fn le(&mut self, name: &'static str, lhs: f64, rhs: f64) {
        self.out.push(CheckOutcome { name, margin: lhs - rhs, tolerance: self.tol });
    }

    fn eq(&mut self, name: &'static str, lhs: f64, rhs: f64) {
        self.out.push(CheckOutcome { name, margin: (lhs - rhs).abs(), tolerance: self.tol });
    }

    fn exact(&mut self, name: &'static str, lhs: f64, rhs: f64) {
        let tolerance = self.tol.min(EXACT_TOL);
        self.out.push(CheckOutcome { name, margin: (lhs - rhs).abs(), tolerance });
    }
}

fn prob_entropy(p: &[f64]) -> Result<f64> {
    Ok(distribution_logical_entropy(&ProbabilityVector::new(p.to_vec())?))
}

fn mixture_of(weights: &[f64], states: &[DensityMatrix]) -> Result<DensityMatrix> {
    let comps: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(states).collect();
    DensityMatrix::mixture(&comps)
}

/// Mixture of states on mutually orthogonal subspaces: block-diagonal
/// embedding followed by a common Haar rotation.
fn orthogonal_mixture(rng: &mut KeyedRng, dim: usize) -> (Vec<f64>, Vec<DensityMatrix>) {
    let parts = rng.random_range(2..=dim.min(4));
    let sizes = random_composition(rng, dim, parts);
    let weights = random_weights(rng, parts);
    let u = random_unitary(rng, dim);
    let mut offset = 0;
    let states = sizes
        .iter()
        .map(|&n| {
            let local = random_density_any_rank(rng, n);
            let mut m = Matrix::zeros(dim);
            for i in 0..n {
                for j in 0..n {
                    m[(offset + i, offset + j)] = local.matrix()[(i, j)];
                }
            }
            offset += n;
            DensityMatrix::from_trusted(m.conjugate_by(&u).hermitian_part(), None)
        })
        .collect();
    (weights, states)
}

fn general_mixture(rng: &mut KeyedRng, dim: usize) -> (Vec<f64>, Vec<DensityMatrix>) {
    let n = rng.random_range(2..=4);
    let weights = random_weights(rng, n);
    let states = (0..n).map(|_| random_density_any_rank(rng, dim)).collect();
    (weights, states)
}

fn mean_entropy(weights: &[f64], states: &[DensityMatrix]) -> f64 {
    weights.iter().zip(states).map(|(p, s)| p * logical_entropy(s)).sum()
}

/// Evaluates every check of one trial; a pure function of its arguments.
pub fn reproduce_trial(id: PropositionId, seed: u64, dim: usize, trial: u64, tol: f64) -> Result<Vec<CheckOutcome>> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {dim}")));
    }
    let mut rng = keyed(seed, id.stream(), dim as u64, trial);
    let rng = &mut rng;
    let mut ck = Checks::new(tol);
    let d = dim as f64;
    match id {
        PropositionId::P1a => {
            let rho = random_density_any_rank(rng, dim);
            ck.le("nonnegative", 0.0, logical_entropy(&rho));
            let pure = random_density(rng, dim, 1);
            ck.eq("pure_is_zero", logical_entropy(&pure), 0.0);
        }
        PropositionId::P1b => {
            let rho = random_density_any_rank(rng, dim);
            ck.le("upper_bound", logical_entropy(&rho), 1.0 - 1.0 / d);
            let mm = logical_entropy(&DensityMatrix::maximally_mixed(dim));
            ck.exact("maximally_mixed_attains_bound", mm, 1.0 - 1.0 / d);
        }
        PropositionId::P1c => {
            let db = rng.random_range(2..=3);
            let psi = random_state_vector(rng, dim * db);
            let joint = DensityMatrix::pure(&psi)?.with_dims(vec![dim, db])?;
            ck.eq(
                "reduced_entropies_equal",
                logical_entropy(&joint.reduced_a()?),
                logical_entropy(&joint.reduced_b()?),
            );
            let rho = random_density_any_rank(rng, dim);
            let purified = DensityMatrix::pure(&purify(&rho))?.with_dims(vec![dim, dim])?;
            ck.eq("purification_reduces_to_input", purified.reduced_a()?.matrix().max_abs_diff(rho.matrix()), 0.0);
            ck.eq("purification_ancilla_entropy", logical_entropy(&purified.reduced_b()?), logical_entropy(&rho));
        }
        PropositionId::P1d => {
            let db = rng.random_range(2..=3);
            let ra = random_density_any_rank(rng, dim);
            let rb = random_density_any_rank(rng, db);
            let (la, lb) = (logical_entropy(&ra), logical_entropy(&rb));
            ck.eq("product_identity", logical_entropy(&ra.tensor(&rb)), la + lb - la * lb);
        }
        PropositionId::P2 => {
            let db = rng.random_range(2..=3);
            let rho = random_bipartite(rng, dim, db);
            let (la, lb) = (logical_entropy(&rho.reduced_a()?), logical_entropy(&rho.reduced_b()?));
            ck.le("subadditivity", logical_entropy(&rho), la + lb);
        }
        PropositionId::P3 => {
            let db = rng.random_range(2..=3);
            let rho = random_bipartite(rng, dim, db);
            let blocks = rng.random_range(1..=dim);
            let groups = random_composition(rng, dim, blocks);
            let pvm = random_pvm(rng, dim, Some(&groups))?;
            let conditional: f64 = conditional_states(&rho, &pvm)?
                .iter()
                .map(|c| c.probability * logical_entropy(&c.state))
                .sum();
            let la = logical_entropy(&rho.reduced_a()?);
            ck.le("firm_subadditivity", logical_entropy(&rho), la + conditional);
        }
        PropositionId::P4 => {
            let db = rng.random_range(2..=3);
            let rho = random_bipartite(rng, dim, db);
            let (la, lb) = (logical_entropy(&rho.reduced_a()?), logical_entropy(&rho.reduced_b()?));
            ck.le("triangle", (la - lb).abs(), logical_entropy(&rho));
        }
        PropositionId::P5 => {
            let rho = random_density_any_rank(rng, dim);
            let channel = match trial % 3 {
                0 => {
                    let n = rng.random_range(2..=4);
                    random_unitary_mixture(rng, dim, n)
                }
                1 => {
                    let blocks = rng.random_range(1..=dim);
                    let groups = random_composition(rng, dim, blocks);
                    UnitalChannel::dephasing(&random_pvm(rng, dim, Some(&groups))?)
                }
                _ => {
                    let n = rng.random_range(2..=4);
                    povm_unital_implementation(&random_povm(rng, dim, n)?)?
                }
            };
            let out = apply_channel(&channel, &rho)?;
            ck.le("entropy_nondecreasing", logical_entropy(&rho), logical_entropy(&out));
            ck.le("output_majorized_by_input", majorization_gap(&rho.eigenvalues(), &out.eigenvalues())?, 0.0);
            let fixed = apply_channel(&channel, &DensityMatrix::maximally_mixed(dim))?;
            ck.eq("unital", fixed.matrix().max_abs_diff(&Matrix::maximally_mixed(dim)), 0.0);
        }
        PropositionId::P6 => {
            let dr = rng.random_range(2..=3);
            let pure = trial % 2 == 0;
            let rho = if pure {
                random_density(rng, dim * dr, 1)
            } else {
                random_density_any_rank(rng, dim * dr)
            }
            .with_dims(vec![dim, dr])?;
            let u = random_unitary(rng, dim * dr);
            let bounds = prop6_bounds(&interaction_blocks(&rho, &u)?, pure);
            ck.le("lower_bound", bounds.lower, bounds.entropy);
            if let Some(upper) = bounds.upper {
                ck.le("upper_bound", bounds.entropy, upper);
                ck.eq("upper_equals_diagonal_impurity", upper, bounds.diagonal_impurity);
            }
        }
        PropositionId::P7 => {
            let (w, states) = general_mixture(rng, dim);
            let rhs = prob_entropy(&w)? + w.iter().zip(&states).map(|(p, s)| p * p * logical_entropy(s)).sum::<f64>();
            ck.le("mixture_bound", logical_entropy(&mixture_of(&w, &states)?), rhs);
            let (w, states) = orthogonal_mixture(rng, dim);
            let rhs = prob_entropy(&w)? + w.iter().zip(&states).map(|(p, s)| p * p * logical_entropy(s)).sum::<f64>();
            ck.eq("orthogonal_support_equality", logical_entropy(&mixture_of(&w, &states)?), rhs);
        }
        PropositionId::P8 => {
            let rho = random_density_any_rank(rng, dim);
            let sigma = random_density_any_rank(rng, dim);
            let forms = logical_divergence_forms(&rho, &sigma)?;
            ck.le("nonnegative", 0.0, forms.definitional);
            ck.eq("hilbert_schmidt_form", forms.definitional, forms.hilbert_schmidt);
            ck.exact("self_divergence_zero", logical_divergence(&rho, &rho)?, 0.0);
        }
        PropositionId::P9 => {
            let (w, states) = orthogonal_mixture(rng, dim);
            let rho = mixture_of(&w, &states)?;
            ck.le("orthogonal_mean_below", mean_entropy(&w, &states), logical_entropy(&rho));
            let (w, states) = general_mixture(rng, dim);
            let rho = mixture_of(&w, &states)?;
            let (mean, lp, l) = (mean_entropy(&w, &states), prob_entropy(&w)?, logical_entropy(&rho));
            ck.le("neighborhood_lower", mean - lp, l);
            ck.le("neighborhood_upper", l, mean + lp);
        }
        PropositionId::P10 => {
            let states: Vec<DensityMatrix> = (0..4).map(|_| random_density_any_rank(rng, dim)).collect();
            let lambda: f64 = rng.random();
            let mix = |a: &DensityMatrix, b: &DensityMatrix| mixture_of(&[lambda, 1.0 - lambda], &[a.clone(), b.clone()]);
            let lhs = logical_divergence(&mix(&states[0], &states[1])?, &mix(&states[2], &states[3])?)?;
            let rhs = lambda * logical_divergence(&states[0], &states[2])?
                + (1.0 - lambda) * logical_divergence(&states[1], &states[3])?;
            ck.le("joint_convexity", lhs, rhs);
        }
        PropositionId::P11 => {
            let db = rng.random_range(2..=3);
            let r1 = random_bipartite(rng, dim, db);
            let r2 = random_bipartite(rng, dim, db);
            let lambda: f64 = rng.random();
            let mixed = mixture_of(&[lambda, 1.0 - lambda], &[r1.clone(), r2.clone()])?.with_dims(vec![dim, db])?;
            let f = |r: &DensityMatrix| relative_logical_entropy(r).map(|x| x.value);
            ck.le("concavity", lambda * f(&r1)? + (1.0 - lambda) * f(&r2)?, f(&mixed)?);
        }
        PropositionId::P12 => {
            let db = rng.random_range(2..=3);
            let rho = random_bipartite(rng, dim, db);
            let sigma = random_bipartite(rng, dim, db);
            let mm = DensityMatrix::maximally_mixed(db);
            let rt = rho.reduced_a()?.tensor(&mm);
            let st = sigma.reduced_a()?.tensor(&mm);
            ck.le("monotonicity", logical_divergence(&rt, &st)?, logical_divergence(&rho, &sigma)?);
            ck.eq("twirl_matches_reduced_product", twirl_subsystem(&rho)?.matrix().max_abs_diff(rt.matrix()), 0.0);
        }
    }
    Ok(ck.out)
}

#[derive(Default)]
struct Aggregate {
    checks: Vec<CheckSummary>,
    failures: Vec<FailureRecord>,
    failure_count: u64,
    worst: f64,
}

impl Aggregate {
    fn new() -> Self {
        Self { worst: f64::NEG_INFINITY, ..Default::default() }
    }

    fn add(&mut self, seed: u64, dim: usize, trial: u64, outcomes: &[CheckOutcome]) {
        for o in outcomes {
            let margin = if o.margin.is_nan() { f64::MAX } else { o.margin };
            let idx = match self.checks.iter().position(|c| c.name == o.name) {
                Some(i) => i,
                None => {
                    self.checks.push(CheckSummary {
                        name: o.name,
                        evaluated: 0,
                        failures: 0,
                        worst_margin: f64::NEG_INFINITY,
                    });
                    self.checks.len() - 1
                }
            };
            let summary = &mut self.checks[idx];
            summary.evaluated += 1;
            summary.worst_margin = summary.worst_margin.max(margin);
            self.worst = self.worst.max(margin);
            if o.failed() {
                summary.failures += 1;
                self.failure_count += 1;
                if self.failures.len() < MAX_FAILURE_RECORDS {
                    self.failures.push(FailureRecord { seed, dim, trial, check: o.name, margin });
                }
            }
        }
    }

    fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(b.name));
        self
    }
}

pub fn verify_proposition(id: PropositionId, cfg: &SamplerConfig) -> PropositionResult {
    let mut agg = Aggregate::new();
    for &dim in &cfg.dims {
        let outcomes: Vec<Vec<CheckOutcome>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                reproduce_trial(id, cfg.seed, dim, t, cfg.tolerance).unwrap_or_else(|_| {
                    vec![CheckOutcome { name: "evaluation_error", margin: f64::MAX, tolerance: cfg.tolerance }]
                })
            })
            .collect();
        for (t, o) in outcomes.iter().enumerate() {
            agg.add(cfg.seed, dim, t as u64, o);
        }
    }
    let agg = agg.finish();
    PropositionResult {
        id: id.label().to_string(),
        description: id.description(),
        seed: cfg.seed,
        dims: cfg.dims.clone(),
        trials: cfg.trials,
        tolerance: cfg.tolerance,
        failure_count: agg.failure_count,
        worst_violation: agg.worst,
        checks: agg.checks,
        failures: agg.failures,
        status: if agg.failure_count == 0 { Status::Verified } else { Status::Violated },
        witness: None,
    }
}

pub const SSA_DIMS: [usize; 3] = [2, 2, 2];

fn ghz() -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![c(0.0, 0.0); 8];
    v[0] = c(s, 0.0);
    v[7] = c(s, 0.0);
    v
}

fn w_state() -> Vec<C64> {
    let s = 1.0 / 3f64.sqrt();
    let mut v = vec![c(0.0, 0.0); 8];
    for k in [1, 2, 4] {
        v[k] = c(s, 0.0);
    }
    v
}

/// GHZ, W, their mixture, and both mixed with white noise.
pub fn ssa_structured_candidates() -> Vec<DensityMatrix> {
    let g = DensityMatrix::pure(&ghz()).expect("normalized");
    let w = DensityMatrix::pure(&w_state()).expect("normalized");
    let white = DensityMatrix::maximally_mixed(8);
    let mut out = vec![g.clone(), w.clone(), DensityMatrix::mixture(&[(0.5, &g), (0.5, &w)]).expect("valid")];
    for p in [0.25, 0.5, 0.75] {
        out.push(DensityMatrix::mixture(&[(p, &g), (1.0 - p, &white)]).expect("valid"));
        out.push(DensityMatrix::mixture(&[(p, &w), (1.0 - p, &white)]).expect("valid"));
    }
    out.into_iter()
        .map(|r| r.with_dims(SSA_DIMS.to_vec()).expect("dimension 8"))
        .collect()
}

/// State examined by search trial `trial`: structured candidates first, then
/// random states with rank weighted toward 2.
pub fn ssa_candidate(seed: u64, trial: u64) -> DensityMatrix {
    let structured = ssa_structured_candidates();
    if let Some(s) = structured.get(trial as usize) {
        return s.clone();
    }
    let mut rng = keyed(seed, Stream::StrongSubadditivity, 8, trial);
    let rank = match rng.random_range(0..8) {
        0..=3 => 2,
        4 | 5 => 3,
        6 => 1,
        _ => rng.random_range(4..=8),
    };
    random_density(&mut rng, 8, rank)
        .with_dims(SSA_DIMS.to_vec())
        .expect("dimension 8")
}

struct SsaTerms {
    abc: f64,
    ab: f64,
    bc: f64,
    b: f64,
}

impl SsaTerms {
    fn violation(&self) -> f64 {
        self.abc + self.b - self.ab - self.bc
    }
}

fn ssa_terms(rho: &DensityMatrix) -> Result<SsaTerms> {
    let ab = rho.reduce(2, crate::linalg::Subsystem::A)?;
    let bc = rho.reduce(1, crate::linalg::Subsystem::B)?;
    let b = bc.reduce(1, crate::linalg::Subsystem::A)?;
    Ok(SsaTerms {
        abc: logical_entropy(rho),
        ab: logical_entropy(&ab),
        bc: logical_entropy(&bc),
        b: logical_entropy(&b),
    })
}

/// Recomputes the violation from explicit index sums and spectra, without the
/// partial-trace and trace-product routines used by the search.
fn ssa_direct_violation(m: &Matrix) -> Result<f64> {
    let idx = |a: usize, b: usize, cc: usize| 4 * a + 2 * b + cc;
    let mut ab = Matrix::zeros(4);
    let mut bc = Matrix::zeros(4);
    let mut b_only = Matrix::zeros(2);
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        for c2 in 0..2 {
                            let v = m[(idx(a, b, cc), idx(a2, b2, c2))];
                            if cc == c2 {
                                ab[(2 * a + b, 2 * a2 + b2)] += v;
                            }
                            if a == a2 {
                                bc[(2 * b + cc, 2 * b2 + c2)] += v;
                            }
                            if a == a2 && cc == c2 {
                                b_only[(b, b2)] += v;
                            }
                        }
                    }
                }
            }
        }
    }
    let spectral = |x: &Matrix| -> Result<f64> {
        Ok(1.0 - hermitian_eig(x)?.eigenvalues.iter().map(|l| l * l).sum::<f64>())
    };
    Ok(spectral(m)? + spectral(&b_only)? - spectral(&ab)? - spectral(&bc)?)
}

/// Searches for `L(ABC) + L(B) > L(AB) + L(BC)` on qubit triples over
/// `cfg.trials` candidates; `cfg.dims` is not used.
pub fn strong_subadditivity_search(cfg: &SamplerConfig) -> PropositionResult {
    let violations: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            ssa_terms(&ssa_candidate(cfg.seed, t))
                .map(|s| s.violation())
                .unwrap_or(f64::NAN)
        })
        .collect();

    let mut agg = Aggregate::new();
    for (t, &v) in violations.iter().enumerate() {
        let o = CheckOutcome { name: "strong_subadditivity", margin: v, tolerance: cfg.tolerance };
        agg.add(cfg.seed, 8, t as u64, &[o]);
    }
    let agg = agg.finish();

    // Largest violation, lowest trial index on ties.
    let best = violations
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .fold(None, |acc: Option<(usize, f64)>, (t, &v)| match acc {
            Some((_, bv)) if bv >= v => acc,
            _ => Some((t, v)),
        });
    let witness = best.filter(|&(_, v)| v > SSA_MIN_VIOLATION).and_then(|(t, v)| {
        let rho = ssa_candidate(cfg.seed, t as u64);
        let terms = ssa_terms(&rho).ok()?;
        let reverified = ssa_direct_violation(rho.matrix()).ok()?;
        Some(SsaWitness {
            trial: t as u64,
            dims: SSA_DIMS,
            violation: v,
            reverified_violation: reverified,
            l_abc: terms.abc,
            l_ab: terms.ab,
            l_bc: terms.bc,
            l_b: terms.b,
            matrix: rho.matrix().rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        })
    });
    let confirmed = witness
        .as_ref()
        .is_some_and(|w| w.reverified_violation > SSA_MIN_VIOLATION && (w.reverified_violation - w.violation).abs() <= cfg.tolerance);
    PropositionResult {
        id: "ssa".into(),
        description: "search for L(ABC) + L(B) > L(AB) + L(BC) on 2x2x2",
        seed: cfg.seed,
        dims: SSA_DIMS.to_vec(),
        trials: cfg.trials,
        tolerance: cfg.tolerance,
        failure_count: agg.failure_count,
        worst_violation: agg.worst,
        checks: agg.checks,
        failures: agg.failures,
        status: if confirmed { Status::CounterexampleFoundAsExpected } else { Status::NoCounterexampleFound },
        witness,
    }
}

/// Fraction of i.i.d. pairs of PVM outcomes, drawn from `q_i = tr(B_i ρ)`, that differ.
pub fn two_draw_quantum_mc(rho: &DensityMatrix, pvm: &Pvm, trials: u64, seed: u64) -> Result<f64> {
    let q = outcome_probabilities(rho, pvm)?;
    let total: f64 = q.iter().sum();
    let q = ProbabilityVector::new(q.iter().map(|x| x.max(0.0) / total).collect())?;
    let distinct = count_distinct_pairs(&q, trials, seed, Stream::QuantumTwoDraw)?;
    Ok(distinct as f64 / trials as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McComparison {
    pub estimate: f64,
    pub analytic: f64,
    /// Binomial standard error `sqrt(L (1 - L) / trials)`.
    pub sigma: f64,
    /// `(estimate - analytic) / sigma`; zero when both the gap and sigma vanish.
    pub z_score: f64,
    pub trials: u64,
    pub seed: u64,
}

pub fn two_draw_comparison(rho: &DensityMatrix, pvm: &Pvm, trials: u64, seed: u64) -> Result<McComparison> {
    let estimate = two_draw_quantum_mc(rho, pvm, trials, seed)?;
    let analytic = pvm_logical_entropy(rho, pvm)?;
    let sigma = (analytic * (1.0 - analytic) / trials as f64).max(0.0).sqrt();
    let gap = estimate - analytic;
    let z_score = if sigma > 0.0 {
        gap / sigma
    } else if gap.abs() <= EXACT_TOL {
        0.0
    } else {
        f64::MAX.copysign(gap)
    };
    Ok(McComparison { estimate, analytic, sigma, z_score, trials, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;

    fn cfg(trials: u64) -> SamplerConfig {
        SamplerConfig::new(42, trials, vec![2, 3, 4]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::new(0, 0, vec![2]).is_err());
        assert!(SamplerConfig::new(0, 1, vec![1]).is_err());
        assert!(SamplerConfig::new(0, 1, vec![]).is_err());
        assert!(SamplerConfig::with_tolerance(0, 1, vec![2], f64::NAN).is_err());
    }

    #[test]
    fn ids_round_trip() {
        for id in PropositionId::ALL {
            assert_eq!(id.label().parse::<PropositionId>().unwrap(), id);
        }
        assert!("13".parse::<PropositionId>().is_err());
    }

    #[test]
    fn every_proposition_verifies() {
        for id in PropositionId::ALL {
            let r = verify_proposition(id, &cfg(60));
            assert_eq!(r.status, Status::Verified, "{id}: {:?}", r.failures);
            assert_eq!(r.failure_count, 0);
        }
    }

    #[test]
    fn maximally_mixed_attains_bound_exactly() {
        let r = verify_proposition(PropositionId::P1b, &cfg(1));
        let c = r.checks.iter().find(|c| c.name == "maximally_mixed_attains_bound").unwrap();
        assert_eq!(c.evaluated, 3);
        assert!(c.worst_margin <= 1e-12);
    }

    #[test]
    fn product_identity_instance() {
        // L_A = 0.375 (spectrum 3/4, 1/4), L_B = 0.5
        let ra = DensityMatrix::new(Matrix::diag(&[0.75, 0.25])).unwrap();
        let rb = DensityMatrix::maximally_mixed(2);
        let l = logical_entropy(&ra.tensor(&rb));
        assert!((l - 0.6875).abs() < 1e-12);
    }

    #[test]
    fn trials_reproduce() {
        let a = reproduce_trial(PropositionId::P5, 9, 3, 17, 1e-9).unwrap();
        let b = reproduce_trial(PropositionId::P5, 9, 3, 17, 1e-9).unwrap();
        assert_eq!(a, b);
        let c = reproduce_trial(PropositionId::P5, 9, 3, 18, 1e-9).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn failures_are_recorded() {
        let mut agg = Aggregate::new();
        agg.add(1, 2, 5, &[CheckOutcome { name: "x", margin: 0.5, tolerance: 1e-9 }]);
        agg.add(1, 2, 6, &[CheckOutcome { name: "x", margin: f64::NAN, tolerance: 1e-9 }]);
        agg.add(1, 2, 7, &[CheckOutcome { name: "x", margin: -1.0, tolerance: 1e-9 }]);
        assert_eq!(agg.failure_count, 2);
        assert_eq!(agg.failures[0].trial, 5);
        assert_eq!(agg.checks[0].evaluated, 3);
        assert_eq!(agg.worst, f64::MAX);
    }

    #[test]
    fn result_is_independent_of_thread_count() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| serde_json::to_string(&verify_proposition(PropositionId::P7, &cfg(50))).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn structured_candidates_evaluate() {
        for r in ssa_structured_candidates() {
            let t = ssa_terms(&r).unwrap();
            assert!(t.violation().is_finite());
            assert!((ssa_direct_violation(r.matrix()).unwrap() - t.violation()).abs() < 1e-12);
        }
    }

    #[test]
    fn ssa_search_finds_witness() {
        let r = strong_subadditivity_search(&SamplerConfig::new(7, 20_000, vec![2]).unwrap());
        assert_eq!(r.status, Status::CounterexampleFoundAsExpected);
        let w = r.witness.unwrap();
        assert!(w.reverified_violation > SSA_MIN_VIOLATION);
        let m = Matrix::from_rows(
            w.matrix.iter().map(|row| row.iter().map(|p| c(p[0], p[1])).collect()).collect(),
        )
        .unwrap();
        assert!((ssa_direct_violation(&m).unwrap() - w.violation).abs() < 1e-9);
    }

    #[test]
    fn quantum_mc_cases() {
        let zero = DensityMatrix::pure(&[cr(1.0), cr(0.0)]).unwrap();
        let pvm = Pvm::computational(2);
        assert_eq!(two_draw_quantum_mc(&zero, &pvm, 1000, 1).unwrap(), 0.0);
        let cmp = two_draw_comparison(&zero, &pvm, 1000, 1).unwrap();
        assert_eq!(cmp.z_score, 0.0);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[cr(s), cr(s)]).unwrap();
        let n = 1_000_000;
        let est = two_draw_quantum_mc(&plus, &pvm, n, 3).unwrap();
        let sigma = (0.25 / n as f64).sqrt();
        assert!((est - 0.5).abs() <= 3.0 * sigma);

        let mm = DensityMatrix::maximally_mixed(3);
        let est = two_draw_quantum_mc(&mm, &Pvm::computational(3), n, 3).unwrap();
        let sigma = ((2.0 / 9.0) / n as f64).sqrt();
        assert!((est - 2.0 / 3.0).abs() <= 3.0 * sigma);
    }
}
