//! Seeded generation of spaces omitting a forbidden class.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::monoid::{Dist, DistanceMonoid};
use crate::omission::{is_free, ForbiddenClass};
use crate::space::{free_amalgamation, MetricSpace, SpaceError};

/// Failed attempts tolerated before giving up.
pub const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("impossible constraint: {0}")]
    Impossible(String),
    #[error("no free space found after {0} attempts")]
    BoundExceeded(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// An `f`-free space on `n_points` points built by gluing random free
/// pieces of at most three points, over one or two existing points, with
/// free amalgamation. The same seed gives the same space.
pub fn random_free_space(
    monoid: Arc<DistanceMonoid>,
    n_points: usize,
    f: &ForbiddenClass,
    seed: u64,
) -> Result<MetricSpace, GenerationError> {
    if f.members.iter().any(|m| m.len() <= 1) {
        return Err(GenerationError::Impossible("a member has at most one point".into()));
    }
    if f.members.iter().any(|m| m.len() > 3) {
        return Err(GenerationError::Impossible("members must have at most three points".into()));
    }
    let nonzero: Vec<Dist> = monoid.nonzero_elements().collect();
    if n_points > 1 && nonzero.is_empty() {
        return Err(GenerationError::Impossible("the monoid has no nonzero element".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut space = MetricSpace::equilateral(monoid.clone(), n_points.min(1), Dist::ZERO)?
        .relabeled((0..n_points.min(1)).map(|i| format!("n{i}")).collect())?;
    let mut attempts = 0;
    while space.len() < n_points {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(GenerationError::BoundExceeded(MAX_ATTEMPTS));
        }
        let glue_size = rng.gen_range(1..=space.len().min(2));
        let fresh = (3 - glue_size).min(n_points - space.len());
        let mut points: Vec<usize> = (0..space.len()).collect();
        points.shuffle(&mut rng);
        let mut glue_points = points[..glue_size].to_vec();
        glue_points.sort_unstable();
        let glued = space.subspace(&glue_points);
        let mut piece = glued.clone();
        let mut ok = true;
        for j in 0..fresh {
            let row: Vec<Dist> = (0..piece.len()).map(|_| *nonzero.choose(&mut rng).expect("nonempty")).collect();
            let label = format!("n{}", space.len() + j);
            match piece.with_point(label, &row) {
                Ok(p) => piece = p,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || !is_free(&piece, f) {
            continue;
        }
        let glue: Vec<(usize, usize)> = glue_points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let amalgam = free_amalgamation(&space, &piece, &glue)?;
        if is_free(&amalgam, f) {
            space = amalgam;
        }
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::make_truncated;
    use crate::omission::odd_perimeter_triangles;

    #[test]
    fn generator_examples() {
        let f5 = odd_perimeter_triangles(5).unwrap();
        let m = f5.members[0].monoid_arc().clone();
        let s = random_free_space(m.clone(), 5, &f5, 1).unwrap();
        assert_eq!(s.len(), 5);
        assert!(is_free(&s, &f5));
        assert_eq!(random_free_space(m.clone(), 5, &f5, 1).unwrap(), s);
        assert_eq!(random_free_space(m, 1, &f5, 7).unwrap().len(), 1);
    }

    #[test]
    fn one_point_member_is_impossible() {
        let r2 = Arc::new(make_truncated(2));
        let point = MetricSpace::equilateral(r2.clone(), 1, Dist::new(1)).unwrap();
        let f = ForbiddenClass::new(vec![point], [Dist::new(1)].into()).unwrap();
        assert!(matches!(random_free_space(r2, 3, &f, 0), Err(GenerationError::Impossible(_))));
    }
}
