//! Closest fair clustering.

pub mod multicolor;
pub mod two_color;

use crate::cluster::{Clustering, ColorProfile};
use crate::error::{Error, Result};
use crate::graph::Vertex;

pub use multicolor::{
    create_pdc_multi, fair_equi, fair_general, fair_power_of_two, make_pdc_fair, multi_gm, MetaColor,
    MetaProfile,
};
pub use two_color::{
    closest_fair_two_color, closest_fair_two_color_staged, create_pdc_two_color, gen_np_hard_instance,
    make_clusters_fair, solve_three_partition, three_partition_witness, ThreePartitionInstance,
    TwoColorStages,
};

pub(crate) fn check_universe(c: &Clustering, prof: &ColorProfile) -> Result<()> {
    if c.n() != prof.n() {
        return Err(Error::UniverseMismatch(c.n(), prof.n()));
    }
    Ok(())
}

/// Drops empty clusters and canonicalizes.
pub(crate) fn assemble(n: usize, clusters: &[Vec<Vertex>]) -> Clustering {
    Clustering::from_clusters(n, clusters).expect("transforms conserve vertices")
}

/// Removes `take` from `cluster`, keeping order.
pub(crate) fn remove_all(cluster: &mut Vec<Vertex>, take: &[Vertex]) {
    cluster.retain(|v| !take.contains(v));
}

/// Smallest-id vertices of `color` in `cluster`, at most `k` of them.
pub(crate) fn smallest_of_color(cluster: &[Vertex], colors: &[usize], color: usize, k: usize) -> Vec<Vertex> {
    let mut of: Vec<Vertex> = cluster.iter().copied().filter(|&v| colors[v] == color).collect();
    of.sort_unstable();
    of.truncate(k);
    of
}

/// Which algorithm the automatic dispatcher picks for a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FairMethod {
    TwoColor,
    Equal,
    General,
}

impl FairMethod {
    pub fn for_profile(prof: &ColorProfile) -> FairMethod {
        let r = prof.ratio();
        if r.iter().all(|&p| p == 1) {
            FairMethod::Equal
        } else if r.len() == 2 && r.contains(&1) {
            FairMethod::TwoColor
        } else {
            FairMethod::General
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FairMethod::TwoColor => "two-color",
            FairMethod::Equal => "equal-proportion",
            FairMethod::General => "general",
        }
    }

    /// Worst-case closeness factor proved for the method on this profile.
    pub fn bound(self, prof: &ColorProfile) -> f64 {
        match self {
            FairMethod::TwoColor => two_color::PIPELINE_BOUND,
            FairMethod::Equal => multicolor::fair_equi_bound(prof.d()),
            FairMethod::General => multicolor::fair_general_bound(prof.d()),
        }
    }
}

/// Closest fair clustering with the algorithm suited to the profile.
pub fn closest_fair(c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
    match FairMethod::for_profile(prof) {
        FairMethod::TwoColor => closest_fair_two_color(c, prof),
        FairMethod::Equal => fair_equi(c, prof),
        FairMethod::General => fair_general(c, prof),
    }
}
