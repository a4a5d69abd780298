//! Resolution of the files and symbolic names a scenario refers to.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};

use eqloc::bredon::{parse_coefficients, ComplexFile, CoefficientSystem, GSimplicialComplex};
use eqloc::coarsespace::{GBornCoarseSpace, SpaceFile};
use eqloc::fingroup::named::by_name;
use eqloc::fingroup::{PermGroup, Subgroup};
use eqloc::homalg::Ring;
use eqloc::orbitcat::{subgroup_labels, OrbitCategory};

/// Looks files up relative to the directory of the scenario (or the
/// working directory for direct subcommands).
#[derive(Clone, Debug)]
pub struct Inputs {
    pub base: PathBuf,
}

impl Inputs {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        Inputs { base: base.into() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        let p = Path::new(name);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn read(&self, name: &str) -> Result<String> {
        let p = self.path(name);
        std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))
    }

    /// A group file, or one of the built-in names (`Z2`, `S3`, …; a
    /// trailing `.json` and letter case are ignored) when no file exists.
    pub fn group(&self, name: &str) -> Result<Arc<PermGroup>> {
        let p = self.path(name);
        if p.is_file() {
            let text = self.read(name)?;
            return Ok(Arc::new(PermGroup::from_json(&text, &p.display().to_string())?));
        }
        let stem = name.trim_end_matches(".json");
        builtin(stem).map(Arc::new).ok_or_else(|| anyhow!("{name}: no such group file or built-in group"))
    }

    pub fn complex(&self, name: &str, group: &Arc<PermGroup>) -> Result<GSimplicialComplex> {
        let location = self.path(name).display().to_string();
        let file = ComplexFile::parse(&self.read(name)?, &location)?;
        file.into_complex(group.clone()).with_context(|| location.clone())
    }

    pub fn space(&self, name: &str, group: &Arc<PermGroup>) -> Result<GBornCoarseSpace> {
        let location = self.path(name).display().to_string();
        let file = SpaceFile::parse(&self.read(name)?, &location)?;
        file.into_g_space(group.clone()).with_context(|| location.clone())
    }

    /// A symbolic tag (`constant:Z`, `repring:R`, …) or a coefficient file.
    pub fn coefficients(&self, spec: &str, orbit: Arc<OrbitCategory>, ring: Option<Ring>) -> Result<CoefficientSystem> {
        let spec = match (spec, ring) {
            ("constant:Z" | "constant:Q", Some(Ring::ZZ)) => "constant:Z",
            ("constant:Z" | "constant:Q", Some(Ring::QQ)) => "constant:Q",
            _ => spec,
        };
        if spec.contains(':') && !self.path(spec).is_file() {
            return Ok(CoefficientSystem::from_tag(spec, orbit)?);
        }
        let location = self.path(spec).display().to_string();
        parse_coefficients(&self.read(spec)?, orbit).with_context(|| location.clone())
    }
}

fn builtin(stem: &str) -> Option<PermGroup> {
    let upper = stem.to_ascii_uppercase();
    let name = match upper.as_str() {
        "TRIVIAL" => "trivial",
        "Z2XZ2" => "Z2xZ2",
        other => other,
    };
    by_name(name)
}

/// An element class given as an index, `identity`, `transpositions`,
/// `<k>-cycles` (a single k-cycle) or `order-<k>` (the unique class of
/// that element order).
pub fn element_class(g: &PermGroup, value: &serde_json::Value) -> Result<usize> {
    let classes = g.conjugacy_classes();
    let pick = |pred: &dyn Fn(usize) -> bool, what: &str| -> Result<usize> {
        let hits: Vec<usize> = (0..classes.len()).filter(|&k| pred(classes[k].representative)).collect();
        match hits.as_slice() {
            [k] => Ok(*k),
            [] => bail!("no element class of {what} in {}", g.name()),
            _ => bail!("{what} names {} classes in {}; give an index", hits.len(), g.name()),
        }
    };
    let moved = |x: usize| g.element(x).iter().enumerate().filter(|(i, &p)| *i != p).count();
    match value {
        serde_json::Value::Number(n) => {
            let k = n.as_u64().ok_or_else(|| anyhow!("class index must be a nonnegative integer"))? as usize;
            if k >= classes.len() {
                bail!("{} has {} element classes; index {k} is out of range", g.name(), classes.len());
            }
            Ok(k)
        }
        serde_json::Value::String(s) => {
            if let Ok(k) = s.parse::<u64>() {
                return element_class(g, &serde_json::Value::from(k));
            }
            match s.as_str() {
                "identity" => Ok(0),
                "transpositions" => pick(&|x| moved(x) == 2 && g.order_of(x) == 2, "transpositions"),
                _ => {
                    if let Some(k) = s.strip_suffix("-cycles").and_then(|k| k.parse::<usize>().ok()) {
                        pick(&|x| moved(x) == k && g.order_of(x) == k, s)
                    } else if let Some(k) = s.strip_prefix("order-").and_then(|k| k.parse::<usize>().ok()) {
                        pick(&|x| g.order_of(x) == k, s)
                    } else {
                        bail!("unknown element class {s:?}")
                    }
                }
            }
        }
        other => bail!("element class must be a number or a name, got {other}"),
    }
}

/// A subgroup class given by its label (`1`, `C2`, `C3`, `G`, …) or index.
pub fn subgroup_class(g: &PermGroup, spec: &str) -> Result<(usize, Subgroup)> {
    let lattice = g.lattice()?;
    let labels = subgroup_labels(g, &lattice);
    let k = match labels.iter().position(|l| l == spec) {
        Some(k) => k,
        None => spec
            .parse::<usize>()
            .ok()
            .filter(|&k| k < lattice.len())
            .ok_or_else(|| anyhow!("unknown subgroup {spec:?}; classes are {}", labels.join(", ")))?,
    };
    Ok((k, lattice.representative(k).clone()))
}
