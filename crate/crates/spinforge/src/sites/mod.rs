//! Built-in defect-site parameter database.
//!
//! Records are transcribed verbatim from the published table, keeping the
//! provenance of every entry: measured values with uncertainties,
//! literature values (`*`), partially resolved values (`**`), plain
//! unresolved entries (`-`), bounded entries (`0<g<1`), and upper bounds
//! (`<=25`). Nothing is defaulted at load time; converting a record into
//! simulation-ready [`SpinParams`] substitutes documented defaults for
//! non-measured components and reports each substitution as a warning.

mod quantity;

pub use quantity::{Provenance, Quantity};

use serde::Deserialize;

use crate::consts::GN_MUN_V51_MHZ_PER_T;
use crate::error::{Error, Result};
use crate::spin::SpinParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polytype {
    FourH,
    SixH,
}

impl Polytype {
    pub fn as_str(&self) -> &'static str {
        match self {
            Polytype::FourH => "4H",
            Polytype::SixH => "6H",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "4H" => Ok(Polytype::FourH),
            "6H" => Ok(Polytype::SixH),
            other => Err(Error::parse(format!("unknown polytype '{other}', expected 4H or 6H"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteLabel {
    Alpha,
    Beta,
    Gamma,
}

impl SiteLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SiteLabel::Alpha => "alpha",
            SiteLabel::Beta => "beta",
            SiteLabel::Gamma => "gamma",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" | "a" | "α" => Ok(SiteLabel::Alpha),
            "beta" | "b" | "β" => Ok(SiteLabel::Beta),
            "gamma" | "g" | "γ" => Ok(SiteLabel::Gamma),
            other => Err(Error::parse(format!(
                "unknown site label '{other}', expected alpha, beta, or gamma"
            ))),
        }
    }
}

/// Orbital states with resolved spin parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orbital {
    Gs1,
    Gs2,
    Es1,
}

impl Orbital {
    pub fn as_str(&self) -> &'static str {
        match self {
            Orbital::Gs1 => "GS1",
            Orbital::Gs2 => "GS2",
            Orbital::Es1 => "ES1",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GS1" => Ok(Orbital::Gs1),
            "GS2" => Ok(Orbital::Gs2),
            "ES1" => Ok(Orbital::Es1),
            other => Err(Error::parse(format!(
                "unknown orbital '{other}', expected GS1, GS2, or ES1"
            ))),
        }
    }
}

/// Spin parameters of one orbital state as published.
#[derive(Debug, Clone)]
pub struct OrbitalSpin {
    pub g_perp: Quantity,
    pub g_zz: Quantity,
    /// Hyperfine principal values (xx, yy, zz), MHz.
    pub a_mhz: [Quantity; 3],
    /// Principal-axis tilt angles (θxx, θyy, θzz), degrees.
    pub theta_deg: [Quantity; 3],
}

/// One inequivalent lattice site.
#[derive(Debug, Clone)]
pub struct SiteRecord {
    pub polytype: Polytype,
    pub label: SiteLabel,
    /// Crystallographic assignment (h, k, k1, k2).
    pub assignment: String,
    pub es1_gs1_nm: Quantity,
    pub gs2_gs1_ghz: Quantity,
    pub es2_es1_ghz: Quantity,
    pub es3_es2_ghz: Quantity,
    /// Debye-Waller factor upper bound, percent.
    pub dw_percent: Quantity,
    pub lifetime_ns: Quantity,
    pub gs1: Option<OrbitalSpin>,
    pub gs2: Option<OrbitalSpin>,
    pub es1: Option<OrbitalSpin>,
}

impl SiteRecord {
    pub fn name(&self) -> String {
        format!("{}:{}", self.polytype.as_str(), self.label.as_str())
    }

    pub fn orbital(&self, orbital: Orbital) -> Option<&OrbitalSpin> {
        match orbital {
            Orbital::Gs1 => self.gs1.as_ref(),
            Orbital::Gs2 => self.gs2.as_ref(),
            Orbital::Es1 => self.es1.as_ref(),
        }
    }

    /// Optical transition frequency of ES1−GS1, GHz.
    pub fn es1_gs1_ghz(&self) -> Option<f64> {
        self.es1_gs1_nm.value.map(crate::consts::nm_to_ghz)
    }

    fn validate(&self) -> Result<()> {
        if let Some(nm) = self.es1_gs1_nm.value {
            if !(1200.0..=1500.0).contains(&nm) {
                return Err(Error::invalid(format!(
                    "{}: wavelength {nm} nm outside [1200, 1500]",
                    self.name()
                )));
            }
        }
        if let Some(tau) = self.lifetime_ns.value {
            if tau <= 0.0 || tau.is_nan() {
                return Err(Error::invalid(format!("{}: lifetime must be positive", self.name())));
            }
        }
        Ok(())
    }
}

/// Effective, simulation-ready parameters plus the defaulting warnings.
pub struct EffectiveParams {
    pub params: SpinParams,
    pub warnings: Vec<String>,
}

/// Resolve an orbital's published entries into [`SpinParams`].
///
/// Defaults for non-measured g components: a bounded `0<g<1` entry becomes
/// its midpoint 0.5; an unresolved `-` becomes the value resolved for the
/// same orbital at another site when one exists (0 for GS1, from the
/// quasi-hexagonal sites), otherwise 0.5. Every substitution is reported.
pub fn effective_spin_params(record: &SiteRecord, orbital: Orbital) -> Result<EffectiveParams> {
    let spin = record.orbital(orbital).ok_or_else(|| {
        Error::invalid(format!(
            "{} has no resolved spin parameters for {}",
            record.name(),
            orbital.as_str()
        ))
    })?;
    let mut warnings = Vec::new();
    let site = format!("{} {}", record.name(), orbital.as_str());

    let g_perp = resolve_g(&spin.g_perp, orbital, &site, "g_xx,yy", &mut warnings);
    let g_zz = resolve_g(&spin.g_zz, orbital, &site, "g_zz", &mut warnings);

    let mut a = [0.0; 3];
    for (k, q) in spin.a_mhz.iter().enumerate() {
        a[k] = match q.value {
            Some(v) => v,
            None => {
                warnings.push(format!("{site}: hyperfine component {k} unresolved, using 0 MHz"));
                0.0
            }
        };
    }
    let mut theta = [0.0; 3];
    for (k, q) in spin.theta_deg.iter().enumerate() {
        theta[k] = q.value.unwrap_or(0.0);
    }

    let mut params = SpinParams::v51([g_perp, g_perp, g_zz], a);
    params.a_angles_deg = theta;
    params.gn_mun_mhz_per_t = GN_MUN_V51_MHZ_PER_T;
    params.validate()?;
    Ok(EffectiveParams { params, warnings })
}

fn resolve_g(
    q: &Quantity,
    orbital: Orbital,
    site: &str,
    name: &str,
    warnings: &mut Vec<String>,
) -> f64 {
    match (&q.provenance, q.value, q.bounds) {
        (Provenance::Measured, Some(v), _) => v,
        (Provenance::Literature, Some(v), _) => v,
        (Provenance::PartiallyResolved, Some(v), _) => {
            warnings.push(format!("{site}: {name} = {v} is only partially resolved"));
            v
        }
        (Provenance::Bounded, _, Some((lo, hi))) => {
            let mid = 0.5 * (lo + hi);
            warnings.push(format!(
                "{site}: {name} bounded to {lo} < g < {hi}, using midpoint {mid}"
            ));
            mid
        }
        _ => {
            // unresolved: borrow the same orbital's resolved value when the
            // table has one anywhere (GS1 transverse g is 0 at the
            // quasi-hexagonal sites), otherwise fall back to the bounded
            // midpoint
            let fallback = match orbital {
                Orbital::Gs1 => 0.0,
                Orbital::Gs2 | Orbital::Es1 => 0.5,
            };
            warnings.push(format!("{site}: {name} unresolved, using default {fallback}"));
            fallback
        }
    }
}

// TOML wire format of the database file.
#[derive(Deserialize)]
struct DbFile {
    site: Vec<SiteToml>,
}

#[derive(Deserialize)]
struct SiteToml {
    polytype: String,
    label: String,
    assignment: String,
    es1_gs1_nm: String,
    gs2_gs1_ghz: String,
    es2_es1_ghz: String,
    es3_es2_ghz: String,
    dw_percent: String,
    lifetime_ns: String,
    gs1: Option<OrbitalToml>,
    gs2: Option<OrbitalToml>,
    es1: Option<OrbitalToml>,
}

#[derive(Deserialize)]
struct OrbitalToml {
    g_perp: String,
    g_zz: String,
    /// Either a full (xx, yy, zz) triple ...
    a: Option<[String; 3]>,
    /// ... or an axial pair with xx = yy.
    a_perp: Option<String>,
    a_zz: Option<String>,
    theta: Option<[String; 3]>,
}

impl OrbitalToml {
    fn build(&self, context: &str) -> Result<OrbitalSpin> {
        let a_mhz: [Quantity; 3] = match (&self.a, &self.a_perp, &self.a_zz) {
            (Some(triple), None, None) => [
                Quantity::parse(&triple[0])?,
                Quantity::parse(&triple[1])?,
                Quantity::parse(&triple[2])?,
            ],
            (None, Some(perp), Some(zz)) => {
                [Quantity::parse(perp)?, Quantity::parse(perp)?, Quantity::parse(zz)?]
            }
            _ => {
                return Err(Error::parse(format!(
                    "{context}: specify either a = [xx, yy, zz] or a_perp + a_zz"
                )))
            }
        };
        let theta_deg = match &self.theta {
            Some(t) => {
                [Quantity::parse(&t[0])?, Quantity::parse(&t[1])?, Quantity::parse(&t[2])?]
            }
            None => [Quantity::parse("0")?, Quantity::parse("0")?, Quantity::parse("0")?],
        };
        Ok(OrbitalSpin {
            g_perp: Quantity::parse(&self.g_perp)?,
            g_zz: Quantity::parse(&self.g_zz)?,
            a_mhz,
            theta_deg,
        })
    }
}

/// The full site database.
#[derive(Debug, Clone)]
pub struct SiteDatabase {
    pub sites: Vec<SiteRecord>,
}

/// Environment variable holding an override path for the database file.
pub const DB_ENV_VAR: &str = "SPINFORGE_SITE_DB";

const BUILTIN_DB: &str = include_str!("../../data/table1.toml");

impl SiteDatabase {
    /// The database bundled at build time.
    pub fn builtin() -> Result<Self> {
        Self::parse(BUILTIN_DB)
    }

    /// Load from `SPINFORGE_SITE_DB` when set, else the bundled data.
    pub fn from_env_or_builtin() -> Result<Self> {
        match std::env::var(DB_ENV_VAR) {
            Ok(path) if !path.is_empty() => Self::load(&path),
            _ => Self::builtin(),
        }
    }

    pub fn load(path: &str) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: DbFile =
            toml::from_str(text).map_err(|e| Error::parse(format!("site database: {e}")))?;
        let mut sites = Vec::with_capacity(file.site.len());
        for s in &file.site {
            let polytype = Polytype::parse(&s.polytype)?;
            let label = SiteLabel::parse(&s.label)?;
            let context = format!("{}:{}", s.polytype, s.label);
            let record = SiteRecord {
                polytype,
                label,
                assignment: s.assignment.clone(),
                es1_gs1_nm: Quantity::parse(&s.es1_gs1_nm)?,
                gs2_gs1_ghz: Quantity::parse(&s.gs2_gs1_ghz)?,
                es2_es1_ghz: Quantity::parse(&s.es2_es1_ghz)?,
                es3_es2_ghz: Quantity::parse(&s.es3_es2_ghz)?,
                dw_percent: Quantity::parse(&s.dw_percent)?,
                lifetime_ns: Quantity::parse(&s.lifetime_ns)?,
                gs1: s.gs1.as_ref().map(|o| o.build(&context)).transpose()?,
                gs2: s.gs2.as_ref().map(|o| o.build(&context)).transpose()?,
                es1: s.es1.as_ref().map(|o| o.build(&context)).transpose()?,
            };
            record.validate()?;
            sites.push(record);
        }
        Ok(SiteDatabase { sites })
    }

    pub fn get(&self, polytype: Polytype, label: SiteLabel) -> Result<&SiteRecord> {
        self.sites
            .iter()
            .find(|s| s.polytype == polytype && s.label == label)
            .ok_or_else(|| Error::UnknownSite {
                name: format!("{}:{}", polytype.as_str(), label.as_str()),
                known: self.known_names().join(", "),
            })
    }

    /// Resolve a "4H:beta"-style name.
    pub fn get_by_name(&self, name: &str) -> Result<&SiteRecord> {
        let err = || Error::UnknownSite {
            name: name.to_string(),
            known: self.known_names().join(", "),
        };
        let (poly, label) = name.split_once(':').ok_or_else(err)?;
        let polytype = Polytype::parse(poly.trim()).map_err(|_| err())?;
        let label = SiteLabel::parse(label.trim()).map_err(|_| err())?;
        self.get(polytype, label)
    }

    pub fn known_names(&self) -> Vec<String> {
        self.sites.iter().map(|s| s.name()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_loads_five_sites() {
        let db = SiteDatabase::builtin().unwrap();
        assert_eq!(db.sites.len(), 5);
        assert_eq!(
            db.known_names(),
            vec!["4H:alpha", "4H:beta", "6H:alpha", "6H:beta", "6H:gamma"]
        );
    }

    #[test]
    fn beta_gs1_values() {
        let db = SiteDatabase::builtin().unwrap();
        let beta = db.get(Polytype::FourH, SiteLabel::Beta).unwrap();
        let gs1 = beta.gs1.as_ref().unwrap();
        assert_eq!(gs1.g_zz.value, Some(1.870));
        assert_eq!(gs1.g_zz.uncertainty, Some(0.005));
        assert_eq!(gs1.a_mhz[0].value, Some(103.0));
        assert_eq!(gs1.a_mhz[1].value, Some(188.0));
        assert_eq!(gs1.a_mhz[2].value, Some(174.0));
        assert_eq!(gs1.a_mhz[2].uncertainty, Some(5.0));
        assert_eq!(gs1.g_perp.provenance, Provenance::Bounded);
    }

    #[test]
    fn gamma_optical_values() {
        let db = SiteDatabase::builtin().unwrap();
        let gamma = db.get_by_name("6H:gamma").unwrap();
        assert_eq!(gamma.gs2_gs1_ghz.value, Some(16.0));
        assert_eq!(gamma.lifetime_ns.value, Some(31.0));
        assert_eq!(gamma.assignment, "k2");
    }

    #[test]
    fn alpha_lifetime_and_wavelength() {
        let db = SiteDatabase::builtin().unwrap();
        let alpha = db.get_by_name("4H:alpha").unwrap();
        assert_eq!(alpha.lifetime_ns.value, Some(167.0));
        assert_eq!(alpha.es1_gs1_nm.value, Some(1278.808));
        assert_eq!(alpha.es1_gs1_nm.uncertainty, Some(0.006));
        assert!(alpha.gs2.is_none());
        assert_eq!(alpha.gs1.as_ref().unwrap().g_zz.provenance, Provenance::Literature);
    }

    #[test]
    fn unknown_site_lists_candidates() {
        let db = SiteDatabase::builtin().unwrap();
        match db.get_by_name("4H:delta") {
            Err(Error::UnknownSite { known, .. }) => assert!(known.contains("4H:beta")),
            other => panic!("expected UnknownSite, got {other:?}"),
        }
    }

    #[test]
    fn effective_params_default_bounded_g() {
        let db = SiteDatabase::builtin().unwrap();
        let beta = db.get_by_name("4H:beta").unwrap();
        let eff = effective_spin_params(beta, Orbital::Gs1).unwrap();
        assert_eq!(eff.params.g_principal, [0.5, 0.5, 1.870]);
        assert_eq!(eff.params.a_principal_mhz, [103.0, 188.0, 174.0]);
        assert_eq!(eff.warnings.len(), 1);
        assert!(eff.warnings[0].contains("midpoint"));
    }

    #[test]
    fn effective_params_gs2_tilt() {
        let db = SiteDatabase::builtin().unwrap();
        let beta = db.get_by_name("4H:beta").unwrap();
        let eff = effective_spin_params(beta, Orbital::Gs2).unwrap();
        assert_eq!(eff.params.a_angles_deg, [0.0, 52.0, 0.0]);
        assert_eq!(eff.params.a_principal_mhz, [0.0, 0.0, 257.0]);
    }

    #[test]
    fn alpha_gs1_literature_zero_g_perp() {
        let db = SiteDatabase::builtin().unwrap();
        let alpha = db.get_by_name("4H:alpha").unwrap();
        let eff = effective_spin_params(alpha, Orbital::Gs1).unwrap();
        assert_eq!(eff.params.g_principal, [0.0, 0.0, 1.748]);
        // literature values pass through without a defaulting warning
        assert!(eff.warnings.is_empty(), "{:?}", eff.warnings);
    }

    #[test]
    fn missing_orbital_is_an_error() {
        let db = SiteDatabase::builtin().unwrap();
        let alpha = db.get_by_name("4H:alpha").unwrap();
        assert!(effective_spin_params(alpha, Orbital::Gs2).is_err());
    }
}
