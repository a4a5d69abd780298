use std::collections::BTreeSet;

use super::{ElementClass, PermGroup};
use crate::error::{Error, Result};

/// A set of subgroup conjugacy classes (indices into the group's lattice).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub members: BTreeSet<usize>,
    pub is_subgroup_closed: bool,
}

impl Family {
    /// Validated constructor: fails with `NotAFamily` unless closed under
    /// passing to subgroups.
    pub fn new(g: &PermGroup, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        let lat = g.lattice()?;
        if let Some(&bad) = members.iter().find(|&&m| m >= lat.len()) {
            return Err(Error::NotAFamily(format!("unknown subgroup class {bad}")));
        }
        if !is_family(g, &members)? {
            return Err(Error::NotAFamily(format!("{members:?} is not closed under subgroups")));
        }
        Ok(Family {
            members,
            is_subgroup_closed: true,
        })
    }

    pub fn empty() -> Self {
        Family {
            members: BTreeSet::new(),
            is_subgroup_closed: true,
        }
    }

    pub fn all(g: &PermGroup) -> Result<Self> {
        Ok(Family {
            members: (0..g.lattice()?.len()).collect(),
            is_subgroup_closed: true,
        })
    }

    /// The family generated by (all subgroups of) the given classes.
    pub fn generated_by(g: &PermGroup, classes: &[usize]) -> Result<Self> {
        let lat = g.lattice()?;
        let members = (0..lat.len())
            .filter(|&a| classes.iter().any(|&b| lat.is_subconjugate(a, b)))
            .collect();
        Ok(Family {
            members,
            is_subgroup_closed: true,
        })
    }

    pub fn contains(&self, class: usize) -> bool {
        self.members.contains(&class)
    }

    /// Complement among all subgroup classes.
    pub fn complement(&self, g: &PermGroup) -> Result<BTreeSet<usize>> {
        Ok((0..g.lattice()?.len()).filter(|c| !self.members.contains(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Whether a set of subgroup classes is closed under passing to subgroups.
pub fn is_family(g: &PermGroup, classes: &BTreeSet<usize>) -> Result<bool> {
    let lat = g.lattice()?;
    Ok(classes
        .iter()
        .all(|&b| (0..lat.len()).all(|a| !lat.is_subconjugate(a, b) || classes.contains(&a))))
}

/// Subgroup classes whose members meet `gamma` trivially. The subgroup
/// closure is re-verified rather than assumed.
pub fn family_of_gamma(g: &PermGroup, gamma: &ElementClass) -> Result<Family> {
    let lat = g.lattice()?;
    let members: BTreeSet<usize> = lat
        .classes()
        .iter()
        .filter(|c| c.representative.members().iter().all(|&x| !gamma.contains(x)))
        .map(|c| c.index)
        .collect();
    let closed = is_family(g, &members)?;
    Ok(Family {
        members,
        is_subgroup_closed: closed,
    })
}

impl PermGroup {
    pub fn family_of_gamma(&self, gamma: &ElementClass) -> Result<Family> {
        family_of_gamma(self, gamma)
    }

    pub fn is_family(&self, classes: &BTreeSet<usize>) -> Result<bool> {
        is_family(self, classes)
    }
}
