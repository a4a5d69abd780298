use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use eqloc::bredon::{
    assembly_map, bredon_cellular, coend_eg, equivariant_subdivision, parse_family, tilde_y, verify_gamma_localization, verify_theorem_one,
    CoefficientSystem, GSimplicialComplex, LocalizationMode,
};
use eqloc::coarsespace::{example_spaces, run_coarse_battery, ExampleSpace};
use eqloc::fingroup::{Family, PermGroup};
use eqloc::homalg::{CoendIndex, HomologyGroup, Ring};
use eqloc::orbitcat::OrbitCategory;
use eqloc::repring::{character_table, segal_element, CharacterTable, RElement};
use eqloc::Error;

use crate::inputs::{element_class, subgroup_class, Inputs};
use crate::report::{ErrorReport, Report, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Chartab,
    SegalElement,
    Theorem1,
    GammaLocalization,
    Assembly,
    CoarseAxioms,
    Homology,
}

/// One unit of work, as read from a scenario file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    /// Element class: index or name (`transpositions`, `3-cycles`, …).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<String>,
    /// `gamma=<k>`, `all`, `empty` or comma-separated subgroup classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// `rational-R(G)` or `vanishing-coefficients`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Coefficient tag or file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<Ring>,
    /// Subdivide a non-regular complex instead of rejecting it.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub subdivide: bool,
}

impl Scenario {
    pub fn new(task: Task) -> Self {
        Scenario {
            task,
            group: None,
            complex: None,
            space: None,
            gamma: None,
            subgroup: None,
            family: None,
            mode: None,
            coefficients: None,
            truncate: None,
            ring: None,
            subdivide: false,
        }
    }

    pub fn parse(text: &str, location: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(location, e.to_string()).into())
    }

    fn group(&self, inputs: &Inputs) -> Result<Arc<PermGroup>> {
        let name = self.group.as_deref().ok_or_else(|| anyhow!("scenario needs a \"group\""))?;
        inputs.group(name)
    }

    fn complex(&self, inputs: &Inputs, g: &Arc<PermGroup>) -> Result<GSimplicialComplex> {
        let name = self.complex.as_deref().ok_or_else(|| anyhow!("scenario needs a \"complex\""))?;
        let x = inputs.complex(name, g)?;
        if self.subdivide {
            return Ok(equivariant_subdivision(&x));
        }
        x.require_regular().with_context(|| name.to_string())?;
        Ok(x)
    }

    fn gamma(&self, g: &PermGroup) -> Result<usize> {
        let v = self.gamma.as_ref().ok_or_else(|| anyhow!("scenario needs a \"gamma\""))?;
        element_class(g, v)
    }
}

/// Command-line overrides shared by all scenarios.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub truncate: Option<usize>,
    pub ring: Option<Ring>,
    pub timing: bool,
}

/// Reads and runs one scenario file; file names inside it are resolved
/// against its directory.
pub fn run_scenario(path: &Path, options: &Options) -> Report {
    let location = path.display().to_string();
    let parsed = std::fs::read_to_string(path)
        .with_context(|| format!("reading {location}"))
        .and_then(|text| Scenario::parse(&text, &location));
    match parsed {
        Ok(s) => {
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            run(&s, &Inputs::new(base), options)
        }
        Err(e) => {
            let mut r = Report::new(json!({ "file": location }));
            r.error = Some(error_report(&e));
            r
        }
    }
}

pub fn run(s: &Scenario, inputs: &Inputs, options: &Options) -> Report {
    let start = Instant::now();
    let mut report = Report::new(serde_json::to_value(s).expect("scenarios serialize"));
    let outcome = match s.task {
        Task::Chartab => chartab(s, inputs, &mut report),
        Task::SegalElement => segal(s, inputs, &mut report),
        Task::Theorem1 => theorem_one(s, inputs, options, &mut report),
        Task::GammaLocalization => gamma_localization(s, inputs, options, &mut report),
        Task::Assembly => assembly(s, inputs, options, &mut report),
        Task::CoarseAxioms => coarse(s, inputs, &mut report),
        Task::Homology => homology(s, inputs, options, &mut report),
    };
    if let Err(e) = outcome {
        report.error = Some(error_report(&e));
    }
    if options.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    report
}

fn error_report(e: &anyhow::Error) -> ErrorReport {
    let kind = match e.downcast_ref::<Error>() {
        Some(Error::Parse { .. }) => "ParseError",
        Some(Error::GroupTooLarge { .. }) => "GroupTooLarge",
        Some(Error::NotRegular(_)) => "NotRegular",
        Some(Error::NotAFamily(_)) => "NotAFamily",
        Some(Error::EDoesNotVanish(_)) => "EDoesNotVanish",
        Some(Error::NoSuchElement(_)) => "NoSuchElement",
        Some(_) => "InvalidInput",
        None => "InputError",
    };
    ErrorReport {
        kind: kind.into(),
        message: format!("{e:#}"),
    }
}

fn truncation(s: &Scenario, options: &Options, default: usize) -> usize {
    options.truncate.or(s.truncate).unwrap_or(default)
}

fn ring(s: &Scenario, options: &Options) -> Option<Ring> {
    options.ring.or(s.ring)
}

fn orbit(g: &Arc<PermGroup>) -> Result<Arc<OrbitCategory>> {
    Ok(Arc::new(OrbitCategory::new(g.clone())?))
}

/// Short names for irreducibles: `triv`, `sign` (the ±1-valued linear
/// characters) and `χi` otherwise.
pub fn irreducible_names(t: &CharacterTable) -> Vec<String> {
    let is_sign: Vec<bool> = t
        .irreducibles
        .iter()
        .map(|row| row.iter().all(|v| v.to_rational().is_some_and(|q| q.abs().is_one())))
        .collect();
    let trivial: Vec<bool> = t
        .irreducibles
        .iter()
        .map(|row| row.iter().all(|v| v.to_rational().is_some_and(|q| q.is_one())))
        .collect();
    let signs = (0..t.len()).filter(|&i| is_sign[i] && !trivial[i]).count();
    (0..t.len())
        .map(|i| {
            if trivial[i] {
                "triv".to_string()
            } else if is_sign[i] && signs == 1 {
                "sign".to_string()
            } else {
                format!("χ{i}")
            }
        })
        .collect()
}

/// A virtual character written as `[triv]−[sign]`, `2[χ2]+[sign]`, ….
pub fn formal_sum(eta: &RElement, names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in eta.0.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            out.push('−');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = c.abs();
        if a != BigInt::one() {
            out.push_str(&a.to_string());
        }
        out.push_str(&format!("[{name}]"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn chartab(s: &Scenario, inputs: &Inputs, r: &mut Report) -> Result<()> {
    let g = s.group(inputs)?;
    let t = character_table(&g)?;
    r.expect("orthogonality", t.check_orthogonality().is_ok(), Verdict::Fail, "");
    let names = irreducible_names(&t);
    let classes: Vec<_> = g
        .conjugacy_classes()
        .iter()
        .map(|c| json!({ "representative": g.element(c.representative), "size": c.size() }))
        .collect();
    let rows: Vec<Vec<String>> = t.irreducibles.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
    let mut text = String::new();
    text.push_str(&format!("  class sizes  {}\n", t.class_sizes.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")));
    for (name, row) in names.iter().zip(&rows) {
        text.push_str(&format!("  {name:<6} {}\n", row.join("  ")));
    }
    r.details = json!({
        "order": g.order(),
        "degrees": t.degrees,
        "classes": classes,
        "names": names,
        "irreducibles": rows,
        "text": text,
    });
    Ok(())
}

fn segal(s: &Scenario, inputs: &Inputs, r: &mut Report) -> Result<()> {
    let g = s.group(inputs)?;
    let gamma = s.gamma(&g)?;
    let (class, h) = subgroup_class(&g, s.subgroup.as_deref().ok_or_else(|| anyhow!("scenario needs a \"subgroup\""))?)?;
    let in_family = g.family_of_gamma(&g.conjugacy_classes()[gamma])?.contains(class);
    match segal_element(&g, &h, gamma) {
        Ok(w) => {
            let names = irreducible_names(&character_table(&g)?);
            r.expect(
                "segal-element",
                in_family,
                Verdict::TheoremViolation,
                if in_family { "" } else { "an element exists although H meets the class" },
            );
            r.witnesses.push(json!({
                "eta": w.eta.0.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "formal": formal_sum(&w.eta, &names),
                "trace_at_gamma": w.value,
            }));
        }
        Err(Error::NoSuchElement(msg)) => {
            let verdict = if in_family { Verdict::TheoremViolation } else { Verdict::Pass };
            r.check("segal-element", verdict, format!("no element: {msg}"));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn theorem_one(s: &Scenario, inputs: &Inputs, options: &Options, r: &mut Report) -> Result<()> {
    let g = s.group(inputs)?;
    let x = s.complex(inputs, &g)?;
    let family = family(&g, s.family.as_deref().ok_or_else(|| anyhow!("scenario needs a \"family\""))?)?;
    let o = orbit(&g)?;
    let e = match &s.coefficients {
        Some(spec) => inputs.coefficients(spec, o.clone(), ring(s, options))?,
        None => CoefficientSystem::zero_on_family(o.clone(), &family, ring(s, options).unwrap_or(Ring::ZZ)),
    };
    let y = tilde_y(&x, &o)?;
    let top = truncation(s, options, x.dim() + 2).max(2);
    let cmp = verify_theorem_one(&e, &family, &y, top)?;
    r.expect(
        "theorem-one",
        cmp.quasi_iso,
        Verdict::TheoremViolation,
        format!("E(X^F) -> E(X) in degrees 0..={}", cmp.checked_through),
    );
    r.table("E^G(X^F)", &cmp.source_homology);
    r.table("E^G(X)", &cmp.target_homology);
    Ok(())
}

fn gamma_localization(s: &Scenario, inputs: &Inputs, options: &Options, r: &mut Report) -> Result<()> {
    let g = s.group(inputs)?;
    let x = s.complex(inputs, &g)?;
    let gamma = s.gamma(&g)?;
    let top = truncation(s, options, x.dim() + 2).max(2);
    let mode = match s.mode.as_deref().unwrap_or("rational-R(G)") {
        "rational-R(G)" => LocalizationMode::RationalRepresentationRing,
        "vanishing-coefficients" => {
            let o = orbit(&g)?;
            let e = match &s.coefficients {
                Some(spec) => inputs.coefficients(spec, o, ring(s, options))?,
                None => CoefficientSystem::from_tag(&format!("zero-on-family:gamma={gamma}"), o)?,
            };
            LocalizationMode::VanishingCoefficients(e)
        }
        other => bail!("unknown mode {other:?}; use rational-R(G) or vanishing-coefficients"),
    };
    let rep = verify_gamma_localization(&x, gamma, &mode, top)?;
    r.expect("gamma-localization", rep.verdict, Verdict::TheoremViolation, format!("class {gamma}"));
    if let Some(c) = &rep.coend {
        r.table("E^G(X^gamma)", &c.source_homology);
        r.table("E^G(X)", &c.target_homology);
    }
    if !rep.localized.is_empty() {
        r.table("cellular R(-) homology of X^gamma", &rep.unlocalized_source);
        r.table("cellular R(-) homology of X", &rep.unlocalized_target);
    }
    let mut text = String::new();
    for d in &rep.localized {
        text.push_str(&format!(
            "  localized H{}: dim {} -> dim {}, iso {}\n",
            d.degree, d.source_dim, d.target_dim, d.is_iso
        ));
    }
    if let Some(q) = rep.unlocalized_quasi_iso {
        text.push_str(&format!("  unlocalized inclusion quasi-iso: {q}\n"));
    }
    r.details = json!({
        "localized": rep.localized,
        "unlocalized_quasi_iso": rep.unlocalized_quasi_iso,
        "family_vanishing": rep.family_vanishing,
        "fixed_simplices": rep.fixed_simplices,
        "text": text,
    });
    Ok(())
}

fn assembly(s: &Scenario, inputs: &Inputs, options: &Options, r: &mut Report) -> Result<()> {
    let g = s.group(inputs)?;
    let o = orbit(&g)?;
    let spec = s.coefficients.as_deref().unwrap_or("constant:Z");
    let e = inputs.coefficients(spec, o, ring(s, options))?;
    let family = family(&g, s.family.as_deref().unwrap_or("all"))?;
    let top = truncation(s, options, 4).max(2);
    let a = assembly_map(&e, &family, top);
    let everything = family.members.len() == g.lattice()?.len();
    if everything {
        r.expect("terminal-family-quasi-iso", a.report.quasi_iso, Verdict::TheoremViolation, "");
    }
    r.table("hocolim over F", &a.report.source_homology);
    r.table("E(G/G)", &a.report.target_homology);
    r.details = json!({
        "iso_through": a.report.iso_through,
        "quasi_iso": a.report.quasi_iso,
        "truncation": a.report.truncation,
        "text": format!(
            "  iso through degree {}, quasi-iso {}\n",
            a.report.iso_through.map_or("none".to_string(), |d| d.to_string()),
            a.report.quasi_iso
        ),
    });
    Ok(())
}

/// Checks the coarse battery, or a single space file when one is given.
fn coarse(s: &Scenario, inputs: &Inputs, r: &mut Report) -> Result<()> {
    let spaces = match &s.space {
        Some(name) => {
            let g = s.group(inputs)?;
            vec![ExampleSpace {
                label: name.clone(),
                space: inputs.space(name, &g)?,
            }]
        }
        None => example_spaces()?,
    };
    coarse_report(&spaces, r)
}

pub fn coarse_report(spaces: &[ExampleSpace], r: &mut Report) -> Result<()> {
    let b = run_coarse_battery(spaces)?;
    r.expect(
        "evaluation-maps",
        b.evaluation_checked == b.evaluation_accepted,
        Verdict::TheoremViolation,
        format!("{}/{}", b.evaluation_accepted, b.evaluation_checked),
    );
    r.expect(
        "restriction-functoriality",
        b.restriction_reports_passed == b.spaces,
        Verdict::TheoremViolation,
        format!("{}/{}", b.restriction_reports_passed, b.spaces),
    );
    r.expect(
        "fixed-point-functoriality",
        b.fixed_point_checks == b.fixed_point_accepted,
        Verdict::TheoremViolation,
        format!("{}/{}", b.fixed_point_accepted, b.fixed_point_checks),
    );
    for f in b.evaluation_failures.iter().chain(&b.fixed_point_failures) {
        r.witnesses.push(json!(f));
    }
    r.details = json!({ "spaces": b.spaces, "maps_accepted": b.maps_accepted });
    Ok(())
}

fn homology(s: &Scenario, inputs: &Inputs, options: &Options, r: &mut Report) -> Result<()> {
    let g = s.group(inputs)?;
    let x = s.complex(inputs, &g)?;
    let o = orbit(&g)?;
    let spec = s.coefficients.as_deref().unwrap_or("constant:Z");
    let m = inputs.coefficients(spec, o.clone(), ring(s, options))?;
    let top = truncation(s, options, x.dim() + 2).max(1);
    let y = tilde_y(&x, &o)?;
    let coend = coend_eg(&CoendIndex::new(o.category()), &m, &y, top).certified_homology();
    r.table("coend E^G(X)", &coend);
    if m.is_degree_zero() {
        let cellular = bredon_cellular(&x, &m)?.complex.homology_upto(top - 1);
        let zero = HomologyGroup::zero();
        let agree = (0..=x.dim().min(top - 1)).all(|k| coend.get(k).unwrap_or(&zero) == cellular.get(k).unwrap_or(&zero));
        r.expect("coend-matches-cellular", agree, Verdict::Fail, format!("degrees 0..={}", x.dim().min(top - 1)));
        r.table("cellular Bredon chains", &cellular);
    }
    Ok(())
}

/// `gamma=<element class>` accepts the same names as the `gamma` field.
fn family(g: &PermGroup, spec: &str) -> Result<Family> {
    match spec.trim().strip_prefix("gamma=") {
        Some(c) => {
            let k = element_class(g, &serde_json::Value::from(c))?;
            Ok(parse_family(g, &format!("gamma={k}"))?)
        }
        None => Ok(parse_family(g, spec)?),
    }
}
