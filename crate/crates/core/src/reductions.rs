//! Fair correlation clustering and offline fair consensus, both by
//! reduction to closest fair clustering.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cluster::{consensus_power_sum, ell_root, is_fair, Clustering, ColorProfile, WeightedCcInstance};
use crate::error::{Error, Result};
use crate::fair::{closest_fair, FairMethod};

/// A correlation clustering solver that ignores colors.
pub trait UnfairCcSolver: Send + Sync {
    fn solve(&self, inst: &WeightedCcInstance) -> Result<Clustering>;
    /// Declared approximation factor.
    fn factor(&self) -> f64;
}

/// A closest fair clustering solver.
pub trait FairSolver: Send + Sync {
    fn closest_fair(&self, c: &Clustering, prof: &ColorProfile) -> Result<Clustering>;
    /// Declared closeness factor on this profile.
    fn factor(&self, prof: &ColorProfile) -> f64;
}

/// Randomized pivoting with a fixed seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub seed: u64,
}

impl UnfairCcSolver for Pivot {
    fn solve(&self, inst: &WeightedCcInstance) -> Result<Clustering> {
        Ok(pivot_cc(inst, self.seed))
    }

    fn factor(&self) -> f64 {
        2.5
    }
}

/// The algorithm picked by [`FairMethod::for_profile`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AutoFair;

impl FairSolver for AutoFair {
    fn closest_fair(&self, c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
        closest_fair(c, prof)
    }

    fn factor(&self, prof: &ColorProfile) -> f64 {
        FairMethod::for_profile(prof).bound(prof)
    }
}

/// Adapts a closure into an unfair solver.
pub struct FnUnfair<F> {
    pub f: F,
    pub factor: f64,
}

impl<F> UnfairCcSolver for FnUnfair<F>
where
    F: Fn(&WeightedCcInstance) -> Result<Clustering> + Send + Sync,
{
    fn solve(&self, inst: &WeightedCcInstance) -> Result<Clustering> {
        (self.f)(inst)
    }

    fn factor(&self) -> f64 {
        self.factor
    }
}

/// Adapts a closure into a fair solver.
pub struct FnFair<F> {
    pub f: F,
    pub factor: f64,
}

impl<F> FairSolver for FnFair<F>
where
    F: Fn(&Clustering, &ColorProfile) -> Result<Clustering> + Send + Sync,
{
    fn closest_fair(&self, c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
        (self.f)(c, prof)
    }

    fn factor(&self, _: &ColorProfile) -> f64 {
        self.factor
    }
}

/// The pair of solvers the reductions call.
#[derive(Clone)]
pub struct SolverHandle {
    pub unfair: Arc<dyn UnfairCcSolver>,
    pub fair: Arc<dyn FairSolver>,
}

impl SolverHandle {
    /// Pivot for the unfair half and the automatic fair dispatcher.
    pub fn reference(seed: u64) -> Self {
        SolverHandle { unfair: Arc::new(Pivot { seed }), fair: Arc::new(AutoFair) }
    }

    pub fn new(unfair: impl UnfairCcSolver + 'static, fair: impl FairSolver + 'static) -> Self {
        SolverHandle { unfair: Arc::new(unfair), fair: Arc::new(fair) }
    }

    /// `α + ρ + αρ`.
    pub fn fairfy_factor(&self, prof: &ColorProfile) -> f64 {
        let (a, r) = (self.fair.factor(prof), self.unfair.factor());
        a + r + a * r
    }
}

/// Repeatedly picks a uniformly random unclustered pivot and gathers every
/// unclustered vertex with `w⁺ ≥ ½` to it.
pub fn pivot_cc(inst: &WeightedCcInstance, seed: u64) -> Clustering {
    let n = inst.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for &pivot in &order {
        if label[pivot] != usize::MAX {
            continue;
        }
        label[pivot] = next;
        for u in 0..n {
            if label[u] == usize::MAX && inst.prefers_together(pivot, u) {
                label[u] = next;
            }
        }
        next += 1;
    }
    Clustering::from_labels(&label)
}

/// Solves the instance ignoring colors, then moves to a close fair
/// clustering.
pub fn fairfy_cc(
    inst: &WeightedCcInstance,
    prof: &ColorProfile,
    handles: &SolverHandle,
) -> Result<Clustering> {
    if inst.n() != prof.n() {
        return Err(Error::UniverseMismatch(inst.n(), prof.n()));
    }
    let d = handles.unfair.solve(inst)?;
    let f = handles.fair.closest_fair(&d, prof)?;
    if !is_fair(&f, prof) {
        return Err(Error::Precondition("fair solver returned an unfair clustering".into()));
    }
    Ok(f)
}

/// Winner of the offline consensus selection.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsensusChoice {
    pub clustering: Clustering,
    pub index: usize,
    pub power_sum: u128,
    pub objective: f64,
    /// Fair clustering derived from each input, in input order.
    pub candidates: Vec<Clustering>,
}

/// Makes every input fair and keeps the one with the smallest objective;
/// ties go to the smallest input index.
pub fn fair_consensus_offline(
    inputs: &[Clustering],
    prof: &ColorProfile,
    ell: u32,
    fair: &dyn FairSolver,
) -> Result<ConsensusChoice> {
    if inputs.is_empty() {
        return Err(Error::InvalidInput("need at least one input clustering".into()));
    }
    for c in inputs {
        if c.n() != prof.n() {
            return Err(Error::UniverseMismatch(c.n(), prof.n()));
        }
    }
    let candidates: Vec<Clustering> =
        inputs.par_iter().map(|c| fair.closest_fair(c, prof)).collect::<Result<_>>()?;
    let mut best: Option<(usize, u128)> = None;
    for (i, f) in candidates.iter().enumerate() {
        let s = consensus_power_sum(inputs, f, ell)?;
        if best.is_none_or(|(_, b)| s < b) {
            best = Some((i, s));
        }
    }
    let (index, power_sum) = best.expect("nonempty");
    Ok(ConsensusChoice {
        clustering: candidates[index].clone(),
        index,
        power_sum,
        objective: ell_root(power_sum, ell),
        candidates,
    })
}
