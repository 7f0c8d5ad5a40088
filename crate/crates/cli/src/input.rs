//! Loading codes, plans and families from files and command-line presets.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gbcodes::code::CodeDoc;
use gbcodes::extension::{PlanDoc, SparsityProfile};
use gbcodes::scalable::build_thm4_family;
use gbcodes::{build_gb_str, extend_family, CssCode, ExtensionPlan};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A code file holds either a code document or a plan, whose base is used.
pub fn load_code(path: &Path) -> Result<CssCode> {
    let text = read_text(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if value.get("base").is_some() {
        let plan: PlanDoc = serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(plan.base.to_code()?);
    }
    let doc: CodeDoc = serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?;
    Ok(doc.to_code()?)
}

/// The base code given either as a file or as `--a/--b/--ell`.
pub fn base_code(file: Option<&Path>, a: Option<&str>, b: Option<&str>, ell: Option<usize>) -> Result<CssCode> {
    match (file, a, b, ell) {
        (Some(path), None, None, None) => load_code(path),
        (None, Some(a), Some(b), Some(ell)) => Ok(build_gb_str(a, b, ell)?),
        (None, _, _, _) => bail!("give the base code as --base FILE or all of --a, --b, --ell"),
        _ => bail!("--base conflicts with --a/--b/--ell"),
    }
}

/// `"1..5"` (inclusive) or `"1,2,3"`; member indices are 1-based.
pub fn parse_members(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    let members: Vec<usize> = if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().with_context(|| format!("bad member range {text:?}"))?;
        let hi: usize = hi.trim().parse().with_context(|| format!("bad member range {text:?}"))?;
        (lo..=hi).collect()
    } else {
        text.split(',')
            .map(|m| m.trim().parse().with_context(|| format!("bad member list {text:?}")))
            .collect::<Result<_>>()?
    };
    if members.is_empty() || members.contains(&0) {
        bail!("members are 1-based and the set must be nonempty: {text:?}");
    }
    Ok(members)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Identity,
    Tripling,
    Insertion { r: usize, j: usize },
}

/// Parses `identity`, `thm3` or `thm4:r=R,j=J`; anything else is a file name.
pub fn parse_preset(s: &str) -> Result<Option<Preset>> {
    match s {
        "identity" => return Ok(Some(Preset::Identity)),
        "thm3" => return Ok(Some(Preset::Tripling)),
        _ => {}
    }
    let Some(rest) = s.strip_prefix("thm4:") else { return Ok(None) };
    let (mut r, mut j) = (None, None);
    for kv in rest.split(',') {
        match kv.trim().split_once('=') {
            Some(("r", v)) => r = Some(v.parse().with_context(|| format!("bad r in {s:?}"))?),
            Some(("j", v)) => j = Some(v.parse().with_context(|| format!("bad j in {s:?}"))?),
            _ => bail!("expected thm4:r=R,j=J, got {s:?}"),
        }
    }
    match (r, j) {
        (Some(r), Some(j)) => Ok(Some(Preset::Insertion { r, j })),
        _ => bail!("expected thm4:r=R,j=J, got {s:?}"),
    }
}

/// Selected members of a family, with the plan when one exists.
pub struct Family {
    pub members: Vec<(usize, CssCode)>,
    pub plan: Option<ExtensionPlan>,
    pub base_ell: usize,
}

impl Family {
    pub fn labels(&self) -> Vec<String> {
        gbcodes::sim::member_labels(self.base_ell, &self.members.iter().map(|m| m.0).collect::<Vec<_>>())
    }

    pub fn sparsity(&self) -> Option<SparsityProfile> {
        let codes: Vec<CssCode> = self.members.iter().map(|m| m.1.clone()).collect();
        gbcodes::extension::sparsity_profile(&codes).ok()
    }
}

pub fn build_family(plan: &str, base: impl FnOnce() -> Result<CssCode>, members: &[usize]) -> Result<Family> {
    let top = *members.iter().max().expect("nonempty");
    let (all, plan) = match parse_preset(plan)? {
        Some(Preset::Identity) => {
            let plan = ExtensionPlan::identity(&base()?, top)?;
            (extend_family(&plan)?, Some(plan))
        }
        Some(Preset::Tripling) => {
            let plan = ExtensionPlan::tripling(&base()?, top)?;
            (extend_family(&plan)?, Some(plan))
        }
        Some(Preset::Insertion { r, j }) => (build_thm4_family(&base()?, top, j, r)?, None),
        None => {
            let text = read_text(Path::new(plan))?;
            let doc: PlanDoc = serde_json::from_str(&text).with_context(|| format!("parsing plan {plan}"))?;
            let plan = doc.to_plan()?;
            if top > plan.members() {
                bail!("member {top} requested but the plan has {}", plan.members());
            }
            (extend_family(&plan)?, Some(plan))
        }
    };
    let base_ell = all[0].ell();
    let members = members.iter().map(|&m| (m, all[m - 1].clone())).collect();
    Ok(Family { members, plan, base_ell })
}
