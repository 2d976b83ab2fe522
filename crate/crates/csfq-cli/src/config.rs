//! Flat `key = value` config files: one assignment per line, `#` comments,
//! every key consumed by a documented schema. Unknown or duplicate keys are
//! rejected with their line numbers so typos surface instead of silently
//! falling back to defaults.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use csfq_core::circuit::junction_capacitance;
use csfq_core::{DeviceParams, JunctionGeometry, ResonatorParams};

/// One parsed assignment: value plus the 1-based line it came from.
#[derive(Debug, Clone, Copy)]
struct Entry {
    value: f64,
    line: usize,
}

/// A parsed key = value file with schema-driven consumption.
#[derive(Debug)]
pub struct KeyValueFile {
    entries: BTreeMap<String, Entry>,
    path: String,
}

impl KeyValueFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let stripped = stripped.trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped
                .split_once('=')
                .ok_or_else(|| anyhow!("{path}:{line}: expected `key = value`, got {raw:?}"))?;
            let key = key.trim();
            if key.is_empty() || !valid_key(key) {
                bail!(
                    "{path}:{line}: invalid key {key:?} (lowercase letters, digits, underscores)"
                );
            }
            let value: f64 = value.trim().parse().map_err(|_| {
                anyhow!(
                    "{path}:{line}: value for `{key}` is not a number: {:?}",
                    value.trim()
                )
            })?;
            if let Some(prev) = entries.insert(key.to_string(), Entry { value, line }) {
                bail!(
                    "{path}:{line}: duplicate key `{key}` (first set on line {})",
                    prev.line
                );
            }
        }
        Ok(Self {
            entries,
            path: path.to_string(),
        })
    }

    /// Removes and returns a key, if present.
    fn take(&mut self, key: &str) -> Option<f64> {
        self.entries.remove(key).map(|e| e.value)
    }

    /// Removes a required key or errors naming it.
    fn take_required(&mut self, key: &str) -> Result<f64> {
        self.take(key)
            .ok_or_else(|| anyhow!("{}: missing required key `{key}`", self.path))
    }

    /// Errors on any keys no schema consumed, with their line numbers.
    fn finish(self) -> Result<()> {
        if self.entries.is_empty() {
            return Ok(());
        }
        let list: Vec<String> = self
            .entries
            .iter()
            .map(|(k, e)| format!("`{k}` (line {})", e.line))
            .collect();
        bail!("{}: unknown keys: {}", self.path, list.join(", "));
    }
}

fn valid_key(key: &str) -> bool {
    key.chars()
        .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Schema: `alpha`, `d_large_um`, `d_small_um`, `t_barrier_nm`,
/// `eps_r_barrier`, `c_shunt_ff`, `ej_ghz`, `ec_ghz`.
///
/// The large-junction capacitance always comes from the geometry
/// (`d_large_um`, `t_barrier_nm`, `eps_r_barrier`; the permittivity defaults
/// to 7.05). Electrical entries take precedence over geometric ones: an
/// explicit `alpha` beats `(d_small/d_large)^2`, an explicit `ec_ghz` beats
/// the value derived from the capacitance total.
pub fn load_device(path: &Path) -> Result<DeviceParams> {
    let mut kv = KeyValueFile::load(path)?;
    let d_large_um = kv.take_required("d_large_um")?;
    let t_barrier_nm = kv.take_required("t_barrier_nm")?;
    let eps_r = kv.take("eps_r_barrier").unwrap_or(7.05);
    let c_shunt_ff = kv.take_required("c_shunt_ff")?;
    let ej_ghz = kv.take_required("ej_ghz")?;
    let alpha = match (kv.take("alpha"), kv.take("d_small_um")) {
        (Some(a), _) => a,
        (None, Some(d_small)) => {
            if !(d_small > 0.0) {
                bail!(
                    "{}: d_small_um must be positive, got {d_small}",
                    path.display()
                );
            }
            (d_small / d_large_um) * (d_small / d_large_um)
        }
        (None, None) => bail!(
            "{}: need either `alpha` or `d_small_um` to fix the small junction",
            path.display()
        ),
    };
    let ec_ghz = kv.take("ec_ghz");
    kv.finish()?;

    let geom = JunctionGeometry::new(d_large_um, t_barrier_nm, eps_r)
        .with_context(|| format!("{}: junction geometry", path.display()))?;
    let c_large_ff = junction_capacitance(&geom);
    let device = DeviceParams::new(alpha, c_large_ff, c_shunt_ff, ej_ghz)
        .with_context(|| format!("{}: device parameters", path.display()))?;
    match ec_ghz {
        Some(ec) => device
            .with_charging_energy(ec)
            .with_context(|| format!("{}: ec_ghz", path.display())),
        None => Ok(device),
    }
}

/// Parsed measured-values file for the loss budget.
#[derive(Debug, Clone, Copy)]
pub struct Measured {
    pub f_r_ghz: f64,
    pub kappa_ghz: f64,
    pub insertion_loss_db: f64,
    pub omega01_ghz: f64,
    pub g_ghz: f64,
    pub t1_us: f64,
    pub t2_echo_us: f64,
    pub t2_ramsey_us: f64,
    pub q_ind: Option<f64>,
    pub q_rad: Option<f64>,
}

/// Schema: `f_r_ghz`, `kappa_mhz`, `il_db`, `omega01_ghz`, `g_mhz`, `t1_us`,
/// `t2_echo_us`, `t2_ramsey_us`, optional `q_ind`, `q_rad`.
pub fn load_measured(path: &Path) -> Result<Measured> {
    let mut kv = KeyValueFile::load(path)?;
    let measured = Measured {
        f_r_ghz: kv.take_required("f_r_ghz")?,
        kappa_ghz: kv.take_required("kappa_mhz")? / 1e3,
        insertion_loss_db: kv.take_required("il_db")?,
        omega01_ghz: kv.take_required("omega01_ghz")?,
        g_ghz: kv.take_required("g_mhz")? / 1e3,
        t1_us: kv.take_required("t1_us")?,
        t2_echo_us: kv.take_required("t2_echo_us")?,
        t2_ramsey_us: kv.take_required("t2_ramsey_us")?,
        q_ind: kv.take("q_ind"),
        q_rad: kv.take("q_rad"),
    };
    kv.finish()?;
    Ok(measured)
}

impl Measured {
    pub fn resonator(&self) -> csfq_core::Result<ResonatorParams> {
        ResonatorParams::from_measurement(self.f_r_ghz, self.kappa_ghz, self.insertion_loss_db)
    }
}
