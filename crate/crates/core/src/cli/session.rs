//! Session configuration: named fields, radius generators, caps and the
//! output directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSpec};
use crate::lognorm::{RadiusContext, RadiusDecl};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDecl {
    pub kind: FieldKind,
    pub q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_pbasis_vars: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub precision: u32,
    pub support: usize,
    pub refinement_depth: u32,
    pub certificate_unknowns: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { precision: 40, support: 4096, refinement_depth: 256, certificate_unknowns: 4096 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub fields: BTreeMap<String, FieldDecl>,
    pub radii: Vec<RadiusDecl>,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for SessionConfig {
    /// `q3` = Q_3, `f2t` = F_2((t)), `f4t` = F_4((t)), `f9t` = F_9((t)),
    /// `rf2` = F_2(u1, u2, u3)((t)); radii `r1` (log_q(1/r) = 0.6000...) and
    /// `r0707` (log_q(1/r) = 1/sqrt 2).
    fn default() -> Self {
        let decl = |kind, q, field_size, num_pbasis_vars| FieldDecl { kind, q, field_size, num_pbasis_vars };
        let fields = BTreeMap::from([
            ("q3".to_string(), decl(FieldKind::Padic, 3, None, None)),
            ("f2t".to_string(), decl(FieldKind::FqLaurent, 2, Some(2), None)),
            ("f4t".to_string(), decl(FieldKind::FqLaurent, 2, Some(4), None)),
            ("f9t".to_string(), decl(FieldKind::FqLaurent, 3, Some(9), None)),
            ("rf2".to_string(), decl(FieldKind::RatfunLaurent, 2, None, Some(3))),
        ]);
        SessionConfig {
            fields,
            radii: vec![RadiusDecl::near_six_tenths("r1"), RadiusDecl::default_irrational("r0707")],
            caps: Caps::default(),
            out: default_out(),
        }
    }
}

impl SessionConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: SessionConfig = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.caps;
        if c.precision == 0 || c.support == 0 || c.refinement_depth == 0 || c.certificate_unknowns == 0 {
            return Err(Error::Config("caps must be positive".into()));
        }
        RadiusContext::new(2, self.radii.clone())?;
        for name in self.fields.keys() {
            self.field(name, None)?;
        }
        Ok(())
    }

    /// The named field, with an optional precision cap overriding the session's.
    pub fn field(&self, name: &str, precision: Option<u32>) -> Result<Arc<FieldSpec>> {
        let d = self
            .fields
            .get(name)
            .ok_or_else(|| Error::Config(format!("field `{name}` is not declared")))?;
        let cap = precision.unwrap_or(self.caps.precision);
        if cap == 0 {
            return Err(Error::Config("precision must be positive".into()));
        }
        match d.kind {
            FieldKind::Padic => FieldSpec::padic(d.q, cap),
            FieldKind::FqLaurent => FieldSpec::fq_laurent(d.q, d.field_size.unwrap_or(d.q), cap),
            FieldKind::RatfunLaurent => FieldSpec::ratfun_laurent(d.q, d.num_pbasis_vars.unwrap_or(1), cap),
        }
    }

    /// All declared radii, in base `q` of the given field.
    pub fn radius_context(&self, field: &FieldSpec) -> Result<Arc<RadiusContext>> {
        let ctx = RadiusContext::new(field.q, self.radii.clone())?.with_max_depth(self.caps.refinement_depth);
        Ok(Arc::new(ctx))
    }

    pub fn check_radius(&self, id: &str) -> Result<()> {
        if self.radii.iter().any(|r| r.id == id) {
            Ok(())
        } else {
            Err(Error::UndeclaredRadius(id.to_string()))
        }
    }
}
