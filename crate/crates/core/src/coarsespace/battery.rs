use std::sync::Arc;

use serde::Serialize;

use super::hom::{check_restriction_functoriality, evaluation_map};
use super::space::{all_pairs, check_g_morphism, fixed_points, g_completion, BornCoarseSpace, GBornCoarseSpace, GSet, Rejection};
use crate::error::Result;
use crate::fingroup::named::{cyclic, klein, symmetric};
use crate::fingroup::{PermGroup, Subgroup};
use crate::orbitcat::OrbitCategory;

/// A labelled example G-space.
#[derive(Clone, Debug)]
pub struct ExampleSpace {
    pub label: String,
    pub space: GBornCoarseSpace,
}

#[derive(Clone, Copy, Debug)]
enum CoarseChoice {
    Diagonal,
    Orbits,
    Everything,
}

#[derive(Clone, Copy, Debug)]
enum BornChoice {
    Everything,
    FirstPoint,
    FirstOrbit,
}

/// Disjoint union of orbits `G/K_i` (subgroup-class indices) with the
/// chosen structures.
pub fn orbit_union(
    group: &Arc<PermGroup>,
    classes: &[usize],
    coarse: &str,
    born: &str,
) -> Result<GBornCoarseSpace> {
    let lattice = group.lattice()?;
    let mut offsets = Vec::new();
    let mut actions: Vec<Vec<usize>> = vec![Vec::new(); group.order()];
    let mut size = 0;
    for &c in classes {
        let (s, _) = GSet::cosets(group.clone(), lattice.representative(c));
        offsets.push((size, s.size()));
        for (g, p) in s.action.iter().enumerate() {
            actions[g].extend(p.iter().map(|&x| x + size));
        }
        size += s.size();
    }
    let coarse_gens = match coarse {
        "diagonal" => Vec::new(),
        "orbits" => offsets
            .iter()
            .map(|&(o, n)| all_pairs(n).into_iter().map(|(a, b)| (a + o, b + o)).collect())
            .collect(),
        _ => vec![all_pairs(size)],
    };
    let born_gens = match born {
        "point" => vec![vec![0]],
        "orbit" => vec![(0..offsets[0].1).collect()],
        _ => vec![(0..size).collect()],
    };
    let base = BornCoarseSpace::new(size, coarse_gens, born_gens)?;
    GBornCoarseSpace::from_action(base, group.clone(), actions)
}

/// Finite G-bornological coarse spaces with at most 16 points over small
/// groups, with varied orbit types, coarse structures and bornologies.
pub fn example_spaces() -> Result<Vec<ExampleSpace>> {
    let groups: Vec<(Arc<PermGroup>, Vec<Vec<usize>>)> = vec![
        (Arc::new(cyclic(2)), vec![vec![0], vec![0, 1], vec![1, 1, 0]]),
        (Arc::new(cyclic(3)), vec![vec![0], vec![0, 1]]),
        (Arc::new(cyclic(4)), vec![vec![0], vec![1, 2]]),
        (Arc::new(klein()), vec![vec![0, 4], vec![1, 2, 3]]),
        (Arc::new(symmetric(3)), vec![vec![0, 3], vec![1, 2]]),
    ];
    let coarse = [CoarseChoice::Diagonal, CoarseChoice::Orbits, CoarseChoice::Everything];
    let born = [BornChoice::Everything, BornChoice::FirstPoint, BornChoice::FirstOrbit];
    let mut out = Vec::new();
    for (g, specs) in &groups {
        for spec in specs {
            for c in coarse {
                for b in born {
                    let cs = match c {
                        CoarseChoice::Diagonal => "diagonal",
                        CoarseChoice::Orbits => "orbits",
                        CoarseChoice::Everything => "max",
                    };
                    let bs = match b {
                        BornChoice::Everything => "max",
                        BornChoice::FirstPoint => "point",
                        BornChoice::FirstOrbit => "orbit",
                    };
                    let space = orbit_union(g, spec, cs, bs)?;
                    if space.size() <= 16 {
                        out.push(ExampleSpace {
                            label: format!("{}:{:?}:{cs}:{bs}", g.name(), spec),
                            space,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `f^H: X^H → Y^H` for a G-map `f`, checked as a `W_G(H)`-morphism.
pub fn fixed_point_restriction(
    f: &[usize],
    x: &GBornCoarseSpace,
    y: &GBornCoarseSpace,
    h: &Subgroup,
) -> Result<std::result::Result<(), Rejection>> {
    let (xh, yh) = (fixed_points(x, h)?, fixed_points(y, h)?);
    let map: Vec<usize> = xh
        .points
        .iter()
        .map(|&p| yh.points.binary_search(&f[p]).expect("G-maps send fixed points to fixed points"))
        .collect();
    Ok(check_g_morphism(&map, &xh.space, &yh.space).map(|_| ()))
}

/// Equivariant maps out of a space that are checked as G-morphisms: the
/// identity, the identity onto the maximal structures, the completion
/// comparison `B_G X → X` and the collapse to a point.
pub fn example_maps(x: &GBornCoarseSpace) -> Vec<(String, GBornCoarseSpace, GBornCoarseSpace, Vec<usize>)> {
    let n = x.size();
    let id: Vec<usize> = (0..n).collect();
    let maximal = GBornCoarseSpace {
        base: BornCoarseSpace::max_max(n),
        group: x.group.clone(),
        action: x.action.clone(),
    };
    let point = GBornCoarseSpace::trivial(BornCoarseSpace::max_max(1), x.group.clone());
    vec![
        ("identity".into(), x.clone(), x.clone(), id.clone()),
        ("to maximal".into(), x.clone(), maximal, id.clone()),
        ("from completion".into(), g_completion(x), x.clone(), id),
        ("collapse".into(), x.clone(), point, vec![0; n]),
    ]
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoarseBatteryReport {
    pub spaces: usize,
    pub evaluation_checked: usize,
    pub evaluation_accepted: usize,
    pub evaluation_failures: Vec<String>,
    pub restriction_reports_passed: usize,
    pub maps_accepted: usize,
    pub fixed_point_checks: usize,
    pub fixed_point_accepted: usize,
    pub fixed_point_failures: Vec<String>,
}

impl CoarseBatteryReport {
    pub fn passed(&self) -> bool {
        self.evaluation_checked == self.evaluation_accepted
            && self.restriction_reports_passed == self.spaces
            && self.fixed_point_checks == self.fixed_point_accepted
    }
}

/// Runs the evaluation-map, restriction-functoriality and fixed-point
/// functoriality checks over the example spaces.
pub fn run_coarse_battery(spaces: &[ExampleSpace]) -> Result<CoarseBatteryReport> {
    let mut report = CoarseBatteryReport {
        spaces: spaces.len(),
        ..Default::default()
    };
    for ex in spaces {
        let x = &ex.space;
        let orbit = OrbitCategory::new(x.group.clone())?;
        for object in 0..orbit.object_count() {
            report.evaluation_checked += 1;
            match evaluation_map(x, &orbit, object) {
                Ok(_) => report.evaluation_accepted += 1,
                Err(e) => report.evaluation_failures.push(format!("{} at object {object}: {e}", ex.label)),
            }
        }
        if check_restriction_functoriality(x, &orbit)?.passed() {
            report.restriction_reports_passed += 1;
        }
        let lattice = x.group.lattice()?;
        for (name, source, target, f) in example_maps(x) {
            if check_g_morphism(&f, &source, &target).is_err() {
                continue;
            }
            report.maps_accepted += 1;
            for class in lattice.classes() {
                report.fixed_point_checks += 1;
                match fixed_point_restriction(&f, &source, &target, &class.representative)? {
                    Ok(()) => report.fixed_point_accepted += 1,
                    Err(r) => report
                        .fixed_point_failures
                        .push(format!("{} / {name} / class {}: {r:?}", ex.label, class.index)),
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_large_enough_and_passes() {
        let spaces = example_spaces().unwrap();
        assert!(spaces.len() >= 20);
        assert!(spaces.iter().all(|s| s.space.size() <= 16));
        let report = run_coarse_battery(&spaces).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.maps_accepted > spaces.len());
    }
}
