//! Toric resolution: repeated star subdivision until every cone is smooth.
//!
//! Each round attacks one cone of maximal multiplicity (the lexicographically
//! first among its sorted ray lists, so runs are reproducible), subdividing at
//! the ray from [`pick_subdivision_ray`]. Every replacement cone produced by
//! the subdivision has multiplicity strictly below the old maximum: inside the
//! attacked cone the ray's coordinates are below 1 by construction, and any
//! other cone meets the attacked one in a common face, so the ray's
//! coordinates there are the same face coordinates. The pair (maximal
//! multiplicity, number of cones attaining it) therefore drops
//! lexicographically each round, which bounds the loop.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{pick_subdivision_ray, star_subdivide, Cone, Fan, LatticeVector};

/// One star subdivision performed by [`resolve_fan`].
#[derive(Debug, Clone)]
pub struct SubdivisionStep {
    /// The cone that was attacked (maximal multiplicity at the time).
    pub cone: Cone,
    /// The primitive ray inserted by the subdivision.
    pub ray: LatticeVector,
    /// Sorted multiplicities of all cones before this step, largest first.
    pub before: Vec<BigInt>,
    /// Sorted multiplicities of all cones after this step, largest first.
    pub after: Vec<BigInt>,
}

/// The full record of a toric resolution run.
#[derive(Debug, Clone)]
pub struct ToricResolution {
    pub initial: Fan,
    pub final_fan: Fan,
    pub steps: Vec<SubdivisionStep>,
    /// False when the step budget ran out before the fan became smooth.
    pub completed: bool,
}

impl ToricResolution {
    pub fn subdivision_count(&self) -> usize {
        self.steps.len()
    }
}

fn multiplicity_profile(fan: &Fan) -> Vec<BigInt> {
    let mut mults: Vec<BigInt> = fan.cones().iter().map(Cone::multiplicity).collect();
    mults.sort();
    mults.reverse();
    mults
}

/// Subdivide until the fan is smooth or `max_steps` subdivisions have been
/// spent. A budgeted run returns `completed: false` with the partial fan.
pub fn resolve_fan(fan: &Fan, max_steps: u64) -> Result<ToricResolution> {
    let mut current = fan.clone();
    let mut steps: Vec<SubdivisionStep> = Vec::new();
    let mut completed = true;
    loop {
        let before = multiplicity_profile(&current);
        if before.first().map_or(true, |m| m == &BigInt::from(1)) {
            break; // smooth
        }
        if steps.len() as u64 >= max_steps {
            completed = false;
            break;
        }
        let max_mult = before[0].clone();
        let target = current
            .cones()
            .iter()
            .find(|c| c.multiplicity() == max_mult)
            .expect("a cone attains the maximal multiplicity")
            .clone();
        let ray = pick_subdivision_ray(&target)?;
        let next = star_subdivide(&current, &ray)?;
        let after = multiplicity_profile(&next);

        // The proven measure: (max multiplicity, count at max) drops.
        let count_at = |profile: &[BigInt], m: &BigInt| {
            profile.iter().filter(|x| *x == m).count()
        };
        let new_max = after[0].clone();
        let decreased = new_max < max_mult
            || (new_max == max_mult && count_at(&after, &max_mult) < count_at(&before, &max_mult));
        if !decreased {
            return Err(Error::InvariantViolation(format!(
                "star subdivision at {ray} did not lower the multiplicity profile"
            )));
        }

        steps.push(SubdivisionStep {
            cone: target,
            ray,
            before,
            after,
        });
        current = next;
    }
    Ok(ToricResolution {
        initial: fan.clone(),
        final_fan: current,
        steps,
        completed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;

    fn fan(text: &str) -> Fan {
        Fan::parse(text).unwrap()
    }

    #[test]
    fn quadratic_cone_needs_one_step() {
        let run = resolve_fan(&fan("1,0; 1,2"), 100).unwrap();
        assert!(run.completed);
        assert_eq!(run.subdivision_count(), 1);
        assert_eq!(run.steps[0].ray, LatticeVector::from_i64(&[1, 1]));
        assert_eq!(run.final_fan.to_string(), "1,0; 1,1\n1,1; 1,2");
        assert!(run.final_fan.is_smooth());
    }

    #[test]
    fn rational_double_point_chain() {
        // cone((1,0),(1,m)) resolves by inserting (1,1), ..., (1,m-1).
        let run = resolve_fan(&fan("1,0; 1,5"), 100).unwrap();
        assert!(run.completed);
        assert_eq!(run.subdivision_count(), 4);
        assert_eq!(
            run.final_fan.to_string(),
            "1,0; 1,1\n1,1; 1,2\n1,2; 1,3\n1,3; 1,4\n1,4; 1,5"
        );
        // Profiles shrink lexicographically step by step.
        for step in &run.steps {
            assert!(step.after < step.before || step.after.len() > step.before.len());
        }
    }

    #[test]
    fn face_ray_case_resolves() {
        let run = resolve_fan(&fan("1,0,0; 1,2,0; 0,0,1"), 100).unwrap();
        assert!(run.completed);
        assert!(run.final_fan.is_smooth());
        assert_eq!(run.subdivision_count(), 1);
    }

    #[test]
    fn budget_exhaustion_reports_partial_fan() {
        let run = resolve_fan(&fan("1,0; 1,5"), 1).unwrap();
        assert!(!run.completed);
        assert_eq!(run.subdivision_count(), 1);
        assert!(!run.final_fan.is_smooth());
        // The partial fan is still a valid fan and strictly better.
        assert!(run.final_fan.max_multiplicity() < BigInt::from(5));
    }

    #[test]
    fn smooth_input_is_a_fixed_point() {
        let run = resolve_fan(&fan("1,0; 0,1"), 100).unwrap();
        assert!(run.completed);
        assert_eq!(run.subdivision_count(), 0);
        assert_eq!(run.final_fan, run.initial);
    }
}
