//! Finite approximations of homogeneous limits by one-point extensions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::omission::{is_free, ForbiddenClass};
use crate::space::{
    admissible_rows, combinations, enumerate_partial_isometries, extend_to_automorphism, free_amalgamation,
    MetricSpace, PartialIsometry, SpaceError,
};
use crate::monoid::Dist;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FraisseError {
    #[error("the start space contains a forbidden subspace")]
    StartNotFree,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Distances from one new point to every point of `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePointExtension {
    pub base: MetricSpace,
    pub distances: Vec<Dist>,
}

impl OnePointExtension {
    /// `base` with the new point appended under `label`.
    pub fn adjoin(&self, label: String) -> MetricSpace {
        self.base
            .with_point(label, &self.distances)
            .expect("extensions satisfy the triangle inequality")
    }
}

/// Every admissible distance row over the nonzero monoid elements, in
/// lexicographic order; with a constraint, only rows keeping the space free.
pub fn enumerate_one_point_extensions(base: &MetricSpace, constraint: Option<&ForbiddenClass>) -> Vec<OnePointExtension> {
    let allowed: Vec<Dist> = base.monoid().nonzero_elements().collect();
    admissible_rows(base, &allowed)
        .into_iter()
        .map(|distances| OnePointExtension {
            base: base.clone(),
            distances,
        })
        .filter(|e| constraint.is_none_or(|f| is_free(&e.adjoin(fresh_label(&e.base)), f)))
        .collect()
}

fn fresh_label(space: &MetricSpace) -> String {
    let mut i = space.len();
    loop {
        let label = format!("u{i}");
        if space.index_of(&label).is_none() {
            return label;
        }
        i += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturateOptions {
    /// Largest subspace whose extensions are realised.
    pub subspace_cap: usize,
    /// Stop once the space has this many points.
    pub budget: usize,
}

impl Default for SaturateOptions {
    fn default() -> Self {
        SaturateOptions {
            subspace_cap: 3,
            budget: 256,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    /// Extensions of subspaces of the previous level considered.
    pub candidates: usize,
    /// New points added.
    pub adjoined: usize,
    /// Extensions already realised in the previous level.
    pub already_present: usize,
    /// Amalgams rejected by the constraint.
    pub skipped: usize,
    /// Size after the level.
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationReport {
    pub start: MetricSpace,
    /// Points are only ever appended, so each level's space is a prefix.
    pub result: MetricSpace,
    pub depth: usize,
    pub levels: Vec<LevelStats>,
    /// The budget stopped the run early.
    pub partial: bool,
}

/// Some point outside `sub` sits at `distances` from the points of `sub`.
pub fn is_realized(space: &MetricSpace, sub: &[usize], distances: &[Dist]) -> bool {
    (0..space.len()).any(|p| !sub.contains(&p) && sub.iter().zip(distances).all(|(&y, &r)| space.d(p, y) == r))
}

/// Repeat `depth` times: for each subspace of the previous level with at
/// most `subspace_cap` points, in size-then-lexicographic order, and each
/// of its extensions in order, adjoin a realising point by free
/// amalgamation over the subspace unless one is already present.
pub fn saturate(
    start: &MetricSpace,
    depth: usize,
    constraint: Option<&ForbiddenClass>,
    opts: SaturateOptions,
) -> Result<SaturationReport, FraisseError> {
    if constraint.is_some_and(|f| !is_free(start, f)) {
        return Err(FraisseError::StartNotFree);
    }
    let mut current = start.clone();
    let mut levels = Vec::new();
    let mut partial = false;
    'levels: for _ in 0..depth {
        let snapshot = current.clone();
        let mut stats = LevelStats::default();
        for k in 1..=opts.subspace_cap.min(snapshot.len()) {
            for sub in combinations(snapshot.len(), k) {
                let y = snapshot.subspace(&sub);
                for ext in enumerate_one_point_extensions(&y, constraint) {
                    stats.candidates += 1;
                    if is_realized(&snapshot, &sub, &ext.distances) {
                        stats.already_present += 1;
                        continue;
                    }
                    if current.len() >= opts.budget {
                        partial = true;
                        stats.size = current.len();
                        levels.push(stats);
                        break 'levels;
                    }
                    let piece = ext.adjoin(fresh_label(&current));
                    let glue: Vec<(usize, usize)> = sub.iter().enumerate().map(|(i, &p)| (p, i)).collect();
                    let amalgam = free_amalgamation(&current, &piece, &glue)?;
                    if constraint.is_some_and(|f| !is_free(&amalgam, f)) {
                        stats.skipped += 1;
                        continue;
                    }
                    current = amalgam;
                    stats.adjoined += 1;
                }
            }
        }
        stats.size = current.len();
        levels.push(stats);
    }
    Ok(SaturationReport {
        start: start.clone(),
        depth: levels.len(),
        result: current,
        levels,
        partial,
    })
}

/// Partial isometries with at most `size_cap` points in their domain that
/// extend to no automorphism.
pub fn homogeneity_audit(space: &MetricSpace, size_cap: usize) -> Vec<PartialIsometry> {
    enumerate_partial_isometries(space)
        .take_while(|p| p.len() <= size_cap)
        .filter(|p| extend_to_automorphism(space, p.pairs()).is_none())
        .collect()
}
