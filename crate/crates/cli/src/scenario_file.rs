//! Flat TOML scenario files.
//!
//! Every file names a `preset` whose defaults apply to all keys it leaves out. Keys use SI
//! units except where the name says otherwise (`_dbm`, `_db`, `_deg`). Unknown keys, wrong
//! types and out-of-range values are rejected with the offending line.

use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};

use isacsim_core::geometry::{db_to_linear, dbm_to_watts, LinkBudget};
use isacsim_core::scenarios::{polar_ground, PowerMode, SystemAScenario, SystemBScenario};
use isacsim_core::{ArrayGeometry, DecoderKind, Position};
use serde::Deserialize;
use toml::Spanned;

pub const PRESET_A: &str = "system_a.default";
pub const PRESET_B: &str = "system_b.default";
pub const PRESETS: [&str; 2] = [PRESET_A, PRESET_B];

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub source: Option<PathBuf>,
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Some(p) => write!(f, "{}", p.display())?,
            None => write!(f, "scenario")?,
        }
        if let Some(l) = self.line {
            write!(f, ":{l}")?;
        }
        write!(f, ": ")?;
        if let Some(k) = &self.key {
            write!(f, "key `{k}`: ")?;
        }
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ScenarioError {}

/// Sweep grids; each has a default matching the published figure axes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub altitudes: Vec<f64>,
    pub mus: Vec<f64>,
    pub gamma_fractions: Vec<f64>,
    /// Absolute beampattern floors in W; overrides `gamma_fractions` when set.
    pub gammas: Option<Vec<f64>>,
    pub decoders: Vec<DecoderKind>,
    pub user_counts: Vec<usize>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            altitudes: vec![20e3, 30e3, 40e3, 50e3],
            mus: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            gamma_fractions: vec![0.5, 0.6, 0.7, 0.8, 0.9],
            gammas: None,
            decoders: vec![
                DecoderKind::SingleAntenna,
                DecoderKind::Zf,
                DecoderKind::Mmse,
            ],
            user_counts: vec![2, 4, 6],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    A(SystemAScenario),
    B(SystemBScenario),
}

impl Scenario {
    pub fn system(&self) -> &'static str {
        match self {
            Self::A(_) => "a",
            Self::B(_) => "b",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub preset: String,
    pub scenario: Scenario,
    pub grid: SweepGrid,
    pub source: Option<PathBuf>,
    /// File contents, kept for the run manifest.
    pub text: Option<String>,
}

/// Configuration of a named preset with no overrides.
pub fn preset(name: &str) -> Result<ScenarioConfig, ScenarioError> {
    let scenario = match name {
        PRESET_A => Scenario::A(SystemAScenario::default()),
        PRESET_B => Scenario::B(SystemBScenario::default()),
        _ => {
            return Err(ScenarioError {
                source: None,
                line: None,
                key: Some("preset".into()),
                message: format!("unknown preset `{name}`; expected one of {PRESETS:?}"),
            })
        }
    };
    Ok(ScenarioConfig {
        preset: name.to_string(),
        scenario,
        grid: SweepGrid::default(),
        source: None,
        text: None,
    })
}

pub fn load(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError {
        source: Some(path.to_path_buf()),
        line: None,
        key: None,
        message: format!("cannot read file: {e}"),
    })?;
    let mut cfg = parse(&text).map_err(|mut e| {
        e.source = Some(path.to_path_buf());
        e
    })?;
    cfg.source = Some(path.to_path_buf());
    Ok(cfg)
}

pub fn parse(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let ctx = Ctx { text };
    let table: toml::Table = text.parse().map_err(|e| ctx.toml_error(e))?;
    let name = match table.get("preset") {
        Some(toml::Value::String(s)) => s.clone(),
        Some(_) => return Err(ctx.err(None, Some("preset"), "must be a string")),
        None => {
            return Err(ctx.err(
                None,
                Some("preset"),
                format!("missing required key; expected one of {PRESETS:?}"),
            ))
        }
    };
    let mut cfg = preset(&name).map_err(|mut e| {
        e.line = ctx.line_of_key("preset");
        e
    })?;
    match &mut cfg.scenario {
        Scenario::A(scn) => {
            let raw: RawA = toml::from_str(text).map_err(|e| ctx.toml_error(e))?;
            raw.apply(&ctx, scn, &mut cfg.grid)?;
            scn.validate().map_err(|e| ctx.core_error(e))?;
        }
        Scenario::B(scn) => {
            let raw: RawB = toml::from_str(text).map_err(|e| ctx.toml_error(e))?;
            raw.apply(&ctx, scn, &mut cfg.grid)?;
            scn.validate().map_err(|e| ctx.core_error(e))?;
        }
    }
    cfg.text = Some(text.to_string());
    Ok(cfg)
}

type Opt<T> = Option<Spanned<T>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawB {
    #[allow(dead_code)]
    preset: String,
    haps_altitude: Opt<f64>,
    array_rows: Opt<i64>,
    array_cols: Opt<i64>,
    /// Element spacing in wavelengths.
    array_spacing: Opt<f64>,
    num_users: Opt<i64>,
    user_antennas: Opt<i64>,
    decoder: Opt<String>,
    num_targets: Opt<i64>,
    user_disk_radius: Opt<f64>,
    target_disk_radius: Opt<f64>,
    users: Opt<Vec<[f64; 2]>>,
    users_polar: Opt<Vec<[f64; 2]>>,
    targets: Opt<Vec<[f64; 2]>>,
    targets_polar: Opt<Vec<[f64; 2]>>,
    target_rcs: Opt<f64>,
    p_max: Opt<f64>,
    p_max_dbm: Opt<f64>,
    sinr_floor: Opt<f64>,
    sinr_floor_db: Opt<f64>,
    k_factor: Opt<f64>,
    carrier_freq: Opt<f64>,
    noise_power: Opt<f64>,
    noise_power_dbm: Opt<f64>,
    bandwidth: Opt<f64>,
    power_mode: Opt<String>,
    altitudes: Opt<Vec<f64>>,
    gamma_fractions: Opt<Vec<f64>>,
    gammas: Opt<Vec<f64>>,
    decoders: Opt<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawA {
    #[allow(dead_code)]
    preset: String,
    haps_altitude: Opt<f64>,
    uav_altitude: Opt<f64>,
    haps_array_rows: Opt<i64>,
    haps_array_cols: Opt<i64>,
    uav_array_rows: Opt<i64>,
    uav_array_cols: Opt<i64>,
    num_users: Opt<i64>,
    user_antennas: Opt<i64>,
    num_targets: Opt<i64>,
    decoder: Opt<String>,
    access_freq: Opt<f64>,
    backhaul_freq: Opt<f64>,
    uav_power: Opt<f64>,
    uav_power_dbm: Opt<f64>,
    mu: Opt<f64>,
    k_factor: Opt<f64>,
    noise_power: Opt<f64>,
    noise_power_dbm: Opt<f64>,
    bandwidth: Opt<f64>,
    user_disk_radius: Opt<f64>,
    target_disk_radius: Opt<f64>,
    users: Opt<Vec<[f64; 2]>>,
    users_polar: Opt<Vec<[f64; 2]>>,
    targets: Opt<Vec<[f64; 2]>>,
    targets_polar: Opt<Vec<[f64; 2]>>,
    target_rcs: Opt<f64>,
    power_mode: Opt<String>,
    mus: Opt<Vec<f64>>,
    user_counts: Opt<Vec<i64>>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line_at(&self, offset: usize) -> usize {
        let end = offset.min(self.text.len());
        self.text[..end].bytes().filter(|&b| b == b'\n').count() + 1
    }

    /// Line of a top-level `key = ...` assignment.
    fn line_of_key(&self, key: &str) -> Option<usize> {
        self.text
            .lines()
            .position(|l| {
                let l = l.trim_start();
                l.strip_prefix(key)
                    .map(|rest| rest.trim_start().starts_with('='))
                    .unwrap_or(false)
            })
            .map(|i| i + 1)
    }

    fn key_on_line(&self, line: usize) -> Option<String> {
        let l = self.text.lines().nth(line.checked_sub(1)?)?;
        let (k, _) = l.split_once('=')?;
        let k = k.trim();
        (!k.is_empty() && !k.starts_with('#') && !k.starts_with('[')).then(|| k.to_string())
    }

    fn err(
        &self,
        span: Option<Range<usize>>,
        key: Option<&str>,
        msg: impl Into<String>,
    ) -> ScenarioError {
        let line = match (&span, key) {
            (Some(s), _) => Some(self.line_at(s.start)),
            (None, Some(k)) => self.line_of_key(k),
            _ => None,
        };
        ScenarioError {
            source: None,
            line,
            key: key.map(str::to_string),
            message: msg.into(),
        }
    }

    fn toml_error(&self, e: toml::de::Error) -> ScenarioError {
        let line = e.span().map(|s| self.line_at(s.start));
        let message = e.message().trim().to_string();
        let key = line
            .and_then(|l| self.key_on_line(l))
            .filter(|k| !message.contains(&format!("`{k}`")));
        ScenarioError {
            source: None,
            line,
            key,
            message,
        }
    }

    fn core_error(&self, e: isacsim_core::IsacError) -> ScenarioError {
        match e {
            isacsim_core::IsacError::InvalidParameter { name, reason } => {
                self.err(None, Some(name), reason)
            }
            other => self.err(None, None, other.to_string()),
        }
    }

    fn real(&self, key: &str, v: &Opt<f64>, rule: Rule) -> Result<Option<f64>, ScenarioError> {
        let Some(v) = v else { return Ok(None) };
        let x = *v.get_ref();
        if !x.is_finite() || !rule.holds(x) {
            return Err(self.err(Some(v.span()), Some(key), format!("{x} {}", rule.text())));
        }
        Ok(Some(x))
    }

    fn count(&self, key: &str, v: &Opt<i64>, min: i64) -> Result<Option<usize>, ScenarioError> {
        let Some(v) = v else { return Ok(None) };
        let x = *v.get_ref();
        if x < min || x > 1_000_000 {
            return Err(self.err(
                Some(v.span()),
                Some(key),
                format!("{x} must be an integer >= {min}"),
            ));
        }
        Ok(Some(x as usize))
    }

    fn reals(
        &self,
        key: &str,
        v: &Opt<Vec<f64>>,
        rule: Rule,
    ) -> Result<Option<Vec<f64>>, ScenarioError> {
        let Some(v) = v else { return Ok(None) };
        if v.get_ref().is_empty() {
            return Err(self.err(Some(v.span()), Some(key), "list must not be empty"));
        }
        for &x in v.get_ref() {
            if !x.is_finite() || !rule.holds(x) {
                return Err(self.err(
                    Some(v.span()),
                    Some(key),
                    format!("element {x} {}", rule.text()),
                ));
            }
        }
        Ok(Some(v.get_ref().clone()))
    }

    fn decoder(&self, key: &str, v: &Opt<String>) -> Result<Option<DecoderKind>, ScenarioError> {
        let Some(v) = v else { return Ok(None) };
        DecoderKind::parse(v.get_ref()).map(Some).ok_or_else(|| {
            self.err(
                Some(v.span()),
                Some(key),
                format!("`{}` is not one of zf, mmse, mrc, single", v.get_ref()),
            )
        })
    }

    fn power_mode(&self, v: &Opt<String>) -> Result<Option<PowerMode>, ScenarioError> {
        let Some(v) = v else { return Ok(None) };
        match v.get_ref().as_str() {
            "full" => Ok(Some(PowerMode::Full)),
            "cap" => Ok(Some(PowerMode::Cap)),
            other => Err(self.err(
                Some(v.span()),
                Some("power_mode"),
                format!("`{other}` is not one of full, cap"),
            )),
        }
    }

    /// Exactly one of a linear key and its dB-scaled twin may be given.
    fn either(
        &self,
        lin_key: &str,
        lin: &Opt<f64>,
        lin_rule: Rule,
        log_key: &str,
        log: &Opt<f64>,
        convert: fn(f64) -> f64,
    ) -> Result<Option<f64>, ScenarioError> {
        if let (Some(_), Some(b)) = (lin, log) {
            return Err(self.err(
                Some(b.span()),
                Some(log_key),
                format!("conflicts with `{lin_key}`; give only one"),
            ));
        }
        if let Some(x) = self.real(lin_key, lin, lin_rule)? {
            return Ok(Some(x));
        }
        Ok(self.real(log_key, log, Rule::Any)?.map(convert))
    }

    /// Ground positions from `key = [[x, y], ...]` or `key_polar = [[range, azimuth_deg], ...]`.
    fn positions(
        &self,
        key: &str,
        xy: &Opt<Vec<[f64; 2]>>,
        polar: &Opt<Vec<[f64; 2]>>,
        centre: (f64, f64),
    ) -> Result<Option<Vec<Position>>, ScenarioError> {
        let polar_key = format!("{key}_polar");
        match (xy, polar) {
            (Some(_), Some(p)) => Err(self.err(
                Some(p.span()),
                Some(&polar_key),
                format!("conflicts with `{key}`; give only one"),
            )),
            (Some(v), None) => {
                if v.get_ref().iter().flatten().any(|c| !c.is_finite()) {
                    return Err(self.err(Some(v.span()), Some(key), "coordinates must be finite"));
                }
                Ok(Some(
                    v.get_ref()
                        .iter()
                        .map(|&[x, y]| Position::ground(x, y))
                        .collect(),
                ))
            }
            (None, Some(v)) => {
                let mut out = Vec::new();
                for &[r, az] in v.get_ref() {
                    if !(r.is_finite() && r >= 0.0 && az.is_finite()) {
                        return Err(self.err(
                            Some(v.span()),
                            Some(&polar_key),
                            format!(
                                "[{r}, {az}] needs range >= 0 m and a finite azimuth in degrees"
                            ),
                        ));
                    }
                    out.push(polar_ground(centre.0, centre.1, r, az));
                }
                Ok(Some(out))
            }
            (None, None) => Ok(None),
        }
    }

    fn array(
        &self,
        rows_key: &str,
        rows: &Opt<i64>,
        cols_key: &str,
        cols: &Opt<i64>,
        spacing: Option<f64>,
        current: &ArrayGeometry,
    ) -> Result<ArrayGeometry, ScenarioError> {
        let r = self.count(rows_key, rows, 1)?.unwrap_or(current.rows());
        let c = self.count(cols_key, cols, 1)?.unwrap_or(current.cols());
        let s = spacing.unwrap_or(current.spacing());
        ArrayGeometry::new(r, c, s).map_err(|e| self.err(None, Some(rows_key), e.to_string()))
    }
}

#[derive(Clone, Copy)]
enum Rule {
    Any,
    Positive,
    NonNegative,
    Unit,
}

impl Rule {
    fn holds(self, x: f64) -> bool {
        match self {
            Self::Any => true,
            Self::Positive => x > 0.0,
            Self::NonNegative => x >= 0.0,
            Self::Unit => (0.0..=1.0).contains(&x),
        }
    }

    fn text(self) -> &'static str {
        match self {
            Self::Any => "must be finite",
            Self::Positive => "must be > 0",
            Self::NonNegative => "must be >= 0",
            Self::Unit => "must lie in [0, 1]",
        }
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn link(
    ctx: &Ctx,
    current: &LinkBudget,
    freq: Option<f64>,
    noise: Option<f64>,
    bandwidth: Option<f64>,
) -> Result<LinkBudget, ScenarioError> {
    LinkBudget::new(
        freq.unwrap_or(current.carrier_freq),
        noise.unwrap_or(current.noise_power),
        bandwidth.unwrap_or(current.bandwidth),
    )
    .map_err(|e| ctx.core_error(e))
}

impl RawB {
    fn apply(
        &self,
        ctx: &Ctx,
        s: &mut SystemBScenario,
        grid: &mut SweepGrid,
    ) -> Result<(), ScenarioError> {
        set(
            &mut s.haps_altitude,
            ctx.real("haps_altitude", &self.haps_altitude, Rule::Positive)?,
        );
        let spacing = ctx.real("array_spacing", &self.array_spacing, Rule::Positive)?;
        s.array = ctx.array(
            "array_rows",
            &self.array_rows,
            "array_cols",
            &self.array_cols,
            spacing,
            &s.array,
        )?;
        set(
            &mut s.num_users,
            ctx.count("num_users", &self.num_users, 0)?,
        );
        set(
            &mut s.user_antennas,
            ctx.count("user_antennas", &self.user_antennas, 1)?,
        );
        set(&mut s.decoder, ctx.decoder("decoder", &self.decoder)?);
        set(
            &mut s.num_targets,
            ctx.count("num_targets", &self.num_targets, 1)?,
        );
        set(
            &mut s.user_disk_radius,
            ctx.real(
                "user_disk_radius",
                &self.user_disk_radius,
                Rule::NonNegative,
            )?,
        );
        set(
            &mut s.target_disk_radius,
            ctx.real(
                "target_disk_radius",
                &self.target_disk_radius,
                Rule::NonNegative,
            )?,
        );
        if let Some(u) = ctx.positions("users", &self.users, &self.users_polar, (0.0, 0.0))? {
            if self.num_users.is_none() {
                s.num_users = u.len();
            }
            s.users = Some(u);
        }
        if let Some(t) = ctx.positions("targets", &self.targets, &self.targets_polar, (0.0, 0.0))? {
            if self.num_targets.is_none() {
                s.num_targets = t.len();
            }
            s.targets = Some(t);
        }
        set(
            &mut s.target_rcs,
            ctx.real("target_rcs", &self.target_rcs, Rule::Positive)?,
        );
        set(
            &mut s.p_max,
            ctx.either(
                "p_max",
                &self.p_max,
                Rule::Positive,
                "p_max_dbm",
                &self.p_max_dbm,
                dbm_to_watts,
            )?,
        );
        set(
            &mut s.sinr_floor,
            ctx.either(
                "sinr_floor",
                &self.sinr_floor,
                Rule::NonNegative,
                "sinr_floor_db",
                &self.sinr_floor_db,
                db_to_linear,
            )?,
        );
        set(
            &mut s.k_factor,
            ctx.real("k_factor", &self.k_factor, Rule::NonNegative)?,
        );
        let noise = ctx.either(
            "noise_power",
            &self.noise_power,
            Rule::Positive,
            "noise_power_dbm",
            &self.noise_power_dbm,
            dbm_to_watts,
        )?;
        s.link = link(
            ctx,
            &s.link,
            ctx.real("carrier_freq", &self.carrier_freq, Rule::Positive)?,
            noise,
            ctx.real("bandwidth", &self.bandwidth, Rule::Positive)?,
        )?;
        set(&mut s.power_mode, ctx.power_mode(&self.power_mode)?);
        set(
            &mut grid.altitudes,
            ctx.reals("altitudes", &self.altitudes, Rule::Positive)?,
        );
        set(
            &mut grid.gamma_fractions,
            ctx.reals("gamma_fractions", &self.gamma_fractions, Rule::NonNegative)?,
        );
        grid.gammas = ctx.reals("gammas", &self.gammas, Rule::NonNegative)?;
        if let Some(d) = &self.decoders {
            let mut out = Vec::new();
            for name in d.get_ref() {
                out.push(DecoderKind::parse(name).ok_or_else(|| {
                    ctx.err(
                        Some(d.span()),
                        Some("decoders"),
                        format!("`{name}` is not one of zf, mmse, mrc, single"),
                    )
                })?);
            }
            if out.is_empty() {
                return Err(ctx.err(Some(d.span()), Some("decoders"), "list must not be empty"));
            }
            grid.decoders = out;
        }
        Ok(())
    }
}

impl RawA {
    fn apply(
        &self,
        ctx: &Ctx,
        s: &mut SystemAScenario,
        grid: &mut SweepGrid,
    ) -> Result<(), ScenarioError> {
        set(
            &mut s.haps_altitude,
            ctx.real("haps_altitude", &self.haps_altitude, Rule::Positive)?,
        );
        set(
            &mut s.uav_altitude,
            ctx.real("uav_altitude", &self.uav_altitude, Rule::Positive)?,
        );
        s.haps_array = ctx.array(
            "haps_array_rows",
            &self.haps_array_rows,
            "haps_array_cols",
            &self.haps_array_cols,
            None,
            &s.haps_array,
        )?;
        s.uav_array = ctx.array(
            "uav_array_rows",
            &self.uav_array_rows,
            "uav_array_cols",
            &self.uav_array_cols,
            None,
            &s.uav_array,
        )?;
        set(
            &mut s.num_users,
            ctx.count("num_users", &self.num_users, 1)?,
        );
        set(
            &mut s.user_antennas,
            ctx.count("user_antennas", &self.user_antennas, 1)?,
        );
        set(
            &mut s.num_targets,
            ctx.count("num_targets", &self.num_targets, 1)?,
        );
        set(&mut s.decoder, ctx.decoder("decoder", &self.decoder)?);
        set(
            &mut s.access_freq,
            ctx.real("access_freq", &self.access_freq, Rule::Positive)?,
        );
        set(
            &mut s.backhaul_freq,
            ctx.real("backhaul_freq", &self.backhaul_freq, Rule::Positive)?,
        );
        set(
            &mut s.uav_power,
            ctx.either(
                "uav_power",
                &self.uav_power,
                Rule::Positive,
                "uav_power_dbm",
                &self.uav_power_dbm,
                dbm_to_watts,
            )?,
        );
        set(&mut s.mu, ctx.real("mu", &self.mu, Rule::Unit)?);
        set(
            &mut s.k_factor,
            ctx.real("k_factor", &self.k_factor, Rule::NonNegative)?,
        );
        set(
            &mut s.noise_power,
            ctx.either(
                "noise_power",
                &self.noise_power,
                Rule::Positive,
                "noise_power_dbm",
                &self.noise_power_dbm,
                dbm_to_watts,
            )?,
        );
        set(
            &mut s.bandwidth,
            ctx.real("bandwidth", &self.bandwidth, Rule::Positive)?,
        );
        set(
            &mut s.user_disk_radius,
            ctx.real(
                "user_disk_radius",
                &self.user_disk_radius,
                Rule::NonNegative,
            )?,
        );
        set(
            &mut s.target_disk_radius,
            ctx.real(
                "target_disk_radius",
                &self.target_disk_radius,
                Rule::NonNegative,
            )?,
        );
        if let Some(u) = ctx.positions("users", &self.users, &self.users_polar, (0.0, 0.0))? {
            if self.num_users.is_none() {
                s.num_users = u.len();
            }
            s.users = Some(u);
        }
        if let Some(t) = ctx.positions("targets", &self.targets, &self.targets_polar, (0.0, 0.0))? {
            if self.num_targets.is_none() {
                s.num_targets = t.len();
            }
            s.targets = Some(t);
        }
        set(
            &mut s.target_rcs,
            ctx.real("target_rcs", &self.target_rcs, Rule::Positive)?,
        );
        set(&mut s.power_mode, ctx.power_mode(&self.power_mode)?);
        set(&mut grid.mus, ctx.reals("mus", &self.mus, Rule::Unit)?);
        if let Some(v) = &self.user_counts {
            if v.get_ref().is_empty() || v.get_ref().iter().any(|&k| !(1..=64).contains(&k)) {
                return Err(ctx.err(
                    Some(v.span()),
                    Some("user_counts"),
                    "needs a non-empty list of integers in [1, 64]",
                ));
            }
            grid.user_counts = v.get_ref().iter().map(|&k| k as usize).collect();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_b_matches_table_defaults() {
        let cfg = parse("preset = \"system_b.default\"\n").unwrap();
        let Scenario::B(s) = cfg.scenario else {
            panic!()
        };
        assert!((s.p_max - dbm_to_watts(52.0)).abs() < 1e-9);
        assert_eq!((s.array.rows(), s.array.cols()), (8, 8));
        assert_eq!(s.k_factor, 10.0);
        assert_eq!(s.link.carrier_freq, 2.545e9);
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let e = parse("preset = \"system_b.default\"\nhaps_altitud = 3\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.message.contains("haps_altitud"), "{e}");
    }

    #[test]
    fn malformed_number_names_the_key() {
        let e = parse("preset = \"system_b.default\"\n\nhaps_altitude = 20km\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.to_string().contains("haps_altitude"), "{e}");
    }

    #[test]
    fn negative_altitude_is_a_range_error() {
        let e = parse("preset = \"system_b.default\"\nhaps_altitude = -5\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert_eq!(e.key.as_deref(), Some("haps_altitude"));
        assert!(e.message.contains("> 0"));
    }

    #[test]
    fn missing_preset_and_conflicts() {
        assert_eq!(
            parse("haps_altitude = 1\n").unwrap_err().key.as_deref(),
            Some("preset")
        );
        let e = parse("preset = \"system_b.default\"\np_max = 3\np_max_dbm = 30\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = parse("preset = \"system_a.default\"\naltitudes = [1.0]\n").unwrap_err();
        assert!(e.message.contains("altitudes"));
    }

    #[test]
    fn units_are_converted_once() {
        let cfg = parse(
            "preset = \"system_b.default\"\np_max_dbm = 30\nsinr_floor_db = 10\n\
             users_polar = [[1000.0, 90.0]]\n",
        )
        .unwrap();
        let Scenario::B(s) = cfg.scenario else {
            panic!()
        };
        assert!((s.p_max - 1.0).abs() < 1e-12);
        assert!((s.sinr_floor - 10.0).abs() < 1e-12);
        assert_eq!(s.num_users, 1);
        let u = s.users.unwrap()[0];
        assert!(u.x.abs() < 1e-9 && (u.y - 1000.0).abs() < 1e-9);
    }
}
