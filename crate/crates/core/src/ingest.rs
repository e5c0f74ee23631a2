//! Instance loading, synthetic-instance generation, and tabular I/O.
//!
//! Instances come from a single TOML config which either references CSV
//! tables (`source = "files"`) or asks for the seeded synthetic complex
//! (`source = "synthetic"`). Either way, any explicitly-present config
//! section (battery, grid, tariff scalar, EV list, penalties, options)
//! replaces the corresponding defaults, and the result is validated before
//! it is returned: bad data is an error, never silently repaired.
//!
//! CSV layouts (header row, period index column, UTF-8, '.' decimals):
//! - `loads.csv`: period, residential_kw, commercial_kw, residential_common_kw
//! - `pv_samples.csv`: period, sample_0 ... sample_{N-1}
//! - `tariff.csv`: period, residential_rate, commercial_rate

use crate::types::{
    validate_instance, BatterySpec, ComplexInstance, EvSession, GridLimits, LoadProfile,
    PvSampleSet, Schedule, Tariff, TimeGrid, VollPenalties,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("instance validation failed: {0}")]
    Validation(String),
}

fn io_err(path: &Path, source: std::io::Error) -> IngestError {
    IngestError::Io { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> IngestError {
    IngestError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

/// Where the instance data comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Files,
    Synthetic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceSection {
    pub source: SourceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_hours: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FilesSection {
    pub loads: String,
    pub pv_samples: String,
    pub tariff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SynthSection {
    pub seed: u64,
    pub n_samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PvSection {
    pub lcoe: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GridSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_exchange_kw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outage_periods: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BatterySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_cap_kw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_hours: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soc_min_kwh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soc_max_kwh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soc_initial_kwh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PenaltiesSection {
    pub residential: f64,
    pub commercial: f64,
    pub residential_common: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvSection {
    pub capacity_kwh: f64,
    pub charger_power_kw: f64,
    pub efficiency: f64,
    pub arrival_period: usize,
    pub departure_period: usize,
    pub soc_arrival: f64,
    pub soc_departure: f64,
    #[serde(default)]
    pub soc_min: f64,
    #[serde(default = "one")]
    pub soc_max: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct OptionsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shedding_enabled: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ev_discharge_enabled: Option<bool>,
}

/// Parsed run configuration. Relative file paths resolve against the
/// directory containing the config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub instance: InstanceSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub files: Option<FilesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SynthSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pv: Option<PvSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub battery: Option<BatterySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penalties: Option<PenaltiesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ev: Option<Vec<EvSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsSection>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl InstanceConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, IngestError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let mut config: InstanceConfig =
            toml::from_str(&text).map_err(|e| IngestError::Config(e.to_string()))?;
        config.base_dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        Ok(config)
    }

    fn resolve(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

/// Build, override, and validate an instance as described by the config.
pub fn load_instance(config: &InstanceConfig) -> Result<ComplexInstance, IngestError> {
    let mut instance = match config.instance.source {
        SourceKind::Synthetic => {
            let synth = config.synthetic.as_ref().ok_or_else(|| {
                IngestError::Config("source = \"synthetic\" requires a [synthetic] section".into())
            })?;
            if synth.n_samples == 0 {
                return Err(IngestError::Config("synthetic.n_samples must be at least 1".into()));
            }
            synth_instance_with(synth.seed, synth.n_samples, synth.noise_sigma.unwrap_or(0.25))
        }
        SourceKind::Files => {
            let files = config.files.as_ref().ok_or_else(|| {
                IngestError::Config("source = \"files\" requires a [files] section".into())
            })?;
            let loads = read_loads_csv(&config.resolve(&files.loads))?;
            let horizon = loads.residential.len();
            let tariff = read_tariff_csv(&config.resolve(&files.tariff), 0.088)?;
            let samples = read_pv_samples_csv(&config.resolve(&files.pv_samples))?;
            ComplexInstance {
                time_grid: TimeGrid::hourly(horizon),
                tariff,
                loads,
                grid_limits: GridLimits::unconstrained(horizon, 1e6),
                battery: BatterySpec::none(),
                ev_sessions: Vec::new(),
                penalties: VollPenalties::default(),
                pv_samples: PvSampleSet::from_samples(samples),
                shedding_enabled: false,
                ev_discharge_enabled: false,
            }
        }
    };

    let t = instance.time_grid.horizon_length;
    if let Some(step) = config.instance.step_hours {
        instance.time_grid.step_hours = step;
    }
    if let Some(pv) = &config.pv {
        instance.tariff.pv_lcoe = pv.lcoe;
    }
    if let Some(grid) = &config.grid {
        if let Some(max) = grid.max_exchange_kw {
            instance.grid_limits.max_exchange = max;
        }
        if let Some(periods) = &grid.outage_periods {
            let mut mask = vec![false; t];
            for &p in periods {
                if p >= t {
                    return Err(IngestError::Config(format!(
                        "outage period {p} is outside the horizon 0..{t}"
                    )));
                }
                mask[p] = true;
            }
            instance.grid_limits.outage_mask = mask;
        }
    }
    if let Some(b) = &config.battery {
        let power_cap = b.power_cap_kw.unwrap_or(0.0);
        let soc_min = b.soc_min_kwh.unwrap_or(0.0);
        let soc_max = b
            .soc_max_kwh
            .unwrap_or_else(|| power_cap * b.duration_hours.unwrap_or(4.0));
        instance.battery = BatterySpec {
            power_cap,
            efficiency: b.efficiency.unwrap_or(0.9),
            soc_min,
            soc_max,
            soc_initial: b.soc_initial_kwh.unwrap_or(soc_min),
            scale: b.scale.unwrap_or(1.0),
        };
    }
    if let Some(p) = &config.penalties {
        instance.penalties = VollPenalties {
            residential: p.residential,
            commercial: p.commercial,
            residential_common: p.residential_common,
        };
    }
    if let Some(evs) = &config.ev {
        instance.ev_sessions = evs
            .iter()
            .map(|e| EvSession {
                capacity: e.capacity_kwh,
                charger_power: e.charger_power_kw,
                efficiency: e.efficiency,
                arrival_period: e.arrival_period,
                departure_period: e.departure_period,
                soc_arrival: e.soc_arrival,
                soc_departure: e.soc_departure,
                soc_min: e.soc_min,
                soc_max: e.soc_max,
            })
            .collect();
    }
    if let Some(o) = &config.options {
        if let Some(shed) = o.shedding_enabled {
            instance.shedding_enabled = shed;
        }
        if let Some(v2g) = o.ev_discharge_enabled {
            instance.ev_discharge_enabled = v2g;
        }
    }

    let report = validate_instance(&instance);
    if !report.is_valid() {
        return Err(IngestError::Validation(report.to_string()));
    }
    Ok(instance)
}

/// Peak of the synthetic clear-sky profile in kW.
pub const SYNTH_PV_PEAK_KW: f64 = 1540.0;
/// Noise factors are clipped at this multiple of the clear-sky profile.
pub const SYNTH_PV_CLIP: f64 = 1.25;

/// Deterministic synthetic complex: 24 hourly periods, evening-peaked
/// residential demand, a business-hours commercial hump, two-tier rates,
/// an 800 kW / 4 h battery, five charger sessions, and `n_samples`
/// daylight-bell PV trajectories with clipped log-normal day factors.
pub fn synth_instance(seed: u64, n_samples: usize) -> ComplexInstance {
    synth_instance_with(seed, n_samples, 0.25)
}

/// `synth_instance` with an explicit multiplicative noise sigma.
pub fn synth_instance_with(seed: u64, n_samples: usize, noise_sigma: f64) -> ComplexInstance {
    assert!(n_samples >= 1, "need at least one PV sample");
    let horizon = 24;

    let residential = vec![
        185.0, 176.0, 170.0, 168.0, 172.0, 190.0, 228.0, 262.0, 248.0, 222.0, 210.0, 204.0,
        200.0, 198.0, 205.0, 225.0, 270.0, 345.0, 450.0, 520.0, 505.0, 420.0, 310.0, 228.0,
    ];
    let residential_common = vec![
        32.0, 31.0, 30.0, 30.0, 30.0, 32.0, 36.0, 40.0, 42.0, 44.0, 44.0, 45.0, 45.0, 45.0,
        46.0, 48.0, 52.0, 58.0, 62.0, 60.0, 55.0, 48.0, 40.0, 35.0,
    ];
    let commercial = vec![
        14.0, 13.0, 12.0, 12.0, 12.0, 14.0, 18.0, 26.0, 38.0, 48.0, 55.0, 60.0, 62.0, 62.0,
        60.0, 58.0, 55.0, 50.0, 44.0, 38.0, 30.0, 24.0, 18.0, 15.0,
    ];

    let residential_rate: Vec<f64> =
        (0..horizon).map(|t| if (12..=21).contains(&t) { 0.22 } else { 0.09 }).collect();
    let commercial_rate: Vec<f64> =
        (0..horizon).map(|t| if (8..=21).contains(&t) { 0.21 } else { 0.07 }).collect();

    let clear_sky: Vec<f64> = (0..horizon)
        .map(|t| {
            if (7..=19).contains(&t) {
                let d = t as f64 - 13.0;
                SYNTH_PV_PEAK_KW * (-d * d / (2.0 * 2.6 * 2.6)).exp()
            } else {
                0.0
            }
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vec<f64>> = (0..n_samples)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let factor =
                (noise_sigma * z - 0.5 * noise_sigma * noise_sigma).exp().min(SYNTH_PV_CLIP);
            clear_sky.iter().map(|&p| p * factor).collect()
        })
        .collect();

    let ev = |arrival, departure, soc_arrival, soc_departure| EvSession {
        capacity: 75.0,
        charger_power: 12.5,
        efficiency: 0.9,
        arrival_period: arrival,
        departure_period: departure,
        soc_arrival,
        soc_departure,
        soc_min: 0.1,
        soc_max: 1.0,
    };

    ComplexInstance {
        time_grid: TimeGrid::hourly(horizon),
        tariff: Tariff { residential_rate, commercial_rate, pv_lcoe: 0.088 },
        loads: LoadProfile { residential, commercial, residential_common },
        grid_limits: GridLimits::unconstrained(horizon, 2000.0),
        battery: BatterySpec::with_duration(800.0, 0.9, 4.0),
        ev_sessions: vec![
            ev(5, 12, 0.20, 0.95),
            ev(9, 15, 0.20, 1.00),
            ev(15, 21, 0.20, 0.90),
            ev(6, 11, 0.40, 0.80),
            ev(18, 23, 0.30, 0.90),
        ],
        penalties: VollPenalties::default(),
        pv_samples: PvSampleSet::from_samples(samples),
        shedding_enabled: false,
        ev_discharge_enabled: false,
    }
}

fn open_csv(path: &Path) -> Result<csv::Reader<fs::File>, IngestError> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => {
            io_err(path, std::io::Error::new(std::io::ErrorKind::Other, e.to_string()))
        }
        _ => parse_err(path, 0, e.to_string()),
    })
}

fn record_line(record: &csv::StringRecord, fallback: u64) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(fallback)
}

fn parse_field(path: &Path, line: u64, name: &str, raw: &str) -> Result<f64, IngestError> {
    raw.parse::<f64>()
        .map_err(|_| parse_err(path, line, format!("column '{name}': cannot parse '{raw}' as a number")))
}

fn check_period(path: &Path, line: u64, raw: &str, expect: usize) -> Result<(), IngestError> {
    let period: usize = raw
        .parse()
        .map_err(|_| parse_err(path, line, format!("period column: cannot parse '{raw}'")))?;
    if period != expect {
        return Err(parse_err(path, line, format!("period column: expected {expect}, got {period}")));
    }
    Ok(())
}

/// Read a fixed-width numeric table with a leading period column.
fn read_numeric_csv(
    path: &Path,
    expected_header: &[&str],
) -> Result<Vec<Vec<f64>>, IngestError> {
    let mut reader = open_csv(path)?;
    let header = reader.headers().map_err(|e| parse_err(path, 1, e.to_string()))?.clone();
    let got: Vec<&str> = header.iter().collect();
    if got != expected_header {
        return Err(parse_err(
            path,
            1,
            format!("header mismatch: expected {expected_header:?}, got {got:?}"),
        ));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, (i + 2) as u64, e.to_string()))?;
        let line = record_line(&record, (i + 2) as u64);
        if record.len() != expected_header.len() {
            return Err(parse_err(
                path,
                line,
                format!("expected {} columns, got {}", expected_header.len(), record.len()),
            ));
        }
        check_period(path, line, &record[0], i)?;
        let mut row = Vec::with_capacity(record.len() - 1);
        for (j, raw) in record.iter().enumerate().skip(1) {
            row.push(parse_field(path, line, expected_header[j], raw)?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(path, 1, "table has no data rows"));
    }
    Ok(rows)
}

pub fn read_loads_csv(path: &Path) -> Result<LoadProfile, IngestError> {
    let rows = read_numeric_csv(
        path,
        &["period", "residential_kw", "commercial_kw", "residential_common_kw"],
    )?;
    Ok(LoadProfile {
        residential: rows.iter().map(|r| r[0]).collect(),
        commercial: rows.iter().map(|r| r[1]).collect(),
        residential_common: rows.iter().map(|r| r[2]).collect(),
    })
}

pub fn read_tariff_csv(path: &Path, pv_lcoe: f64) -> Result<Tariff, IngestError> {
    let rows = read_numeric_csv(path, &["period", "residential_rate", "commercial_rate"])?;
    Ok(Tariff {
        residential_rate: rows.iter().map(|r| r[0]).collect(),
        commercial_rate: rows.iter().map(|r| r[1]).collect(),
        pv_lcoe,
    })
}

/// Read sample trajectories stored column-per-sample.
pub fn read_pv_samples_csv(path: &Path) -> Result<Vec<Vec<f64>>, IngestError> {
    let mut reader = open_csv(path)?;
    let header = reader.headers().map_err(|e| parse_err(path, 1, e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names.first() != Some(&"period") {
        return Err(parse_err(path, 1, "first column must be 'period'"));
    }
    let n = names.len() - 1;
    if n == 0 {
        return Err(parse_err(path, 1, "need at least one sample column"));
    }
    for (k, name) in names.iter().skip(1).enumerate() {
        let expected = format!("sample_{k}");
        if *name != expected {
            return Err(parse_err(path, 1, format!("expected column '{expected}', got '{name}'")));
        }
    }
    let mut per_period: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, (i + 2) as u64, e.to_string()))?;
        let line = record_line(&record, (i + 2) as u64);
        if record.len() != n + 1 {
            return Err(parse_err(
                path,
                line,
                format!("expected {} columns, got {}", n + 1, record.len()),
            ));
        }
        check_period(path, line, &record[0], i)?;
        let mut row = Vec::with_capacity(n);
        for (j, raw) in record.iter().enumerate().skip(1) {
            row.push(parse_field(path, line, &format!("sample_{}", j - 1), raw)?);
        }
        per_period.push(row);
    }
    if per_period.is_empty() {
        return Err(parse_err(path, 1, "table has no data rows"));
    }
    // Transpose to one trajectory per sample.
    let t = per_period.len();
    Ok((0..n).map(|k| (0..t).map(|i| per_period[i][k]).collect()).collect())
}

fn create_file(path: &Path) -> Result<fs::File, IngestError> {
    fs::File::create(path).map_err(|e| io_err(path, e))
}

pub fn write_loads_csv(loads: &LoadProfile, path: &Path) -> Result<(), IngestError> {
    let mut f = create_file(path)?;
    let mut out = String::from("period,residential_kw,commercial_kw,residential_common_kw\n");
    for t in 0..loads.residential.len() {
        out.push_str(&format!(
            "{t},{},{},{}\n",
            loads.residential[t], loads.commercial[t], loads.residential_common[t]
        ));
    }
    f.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}

pub fn write_tariff_csv(tariff: &Tariff, path: &Path) -> Result<(), IngestError> {
    let mut f = create_file(path)?;
    let mut out = String::from("period,residential_rate,commercial_rate\n");
    for t in 0..tariff.residential_rate.len() {
        out.push_str(&format!(
            "{t},{},{}\n",
            tariff.residential_rate[t], tariff.commercial_rate[t]
        ));
    }
    f.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}

pub fn write_pv_samples_csv(samples: &[Vec<f64>], path: &Path) -> Result<(), IngestError> {
    let mut f = create_file(path)?;
    let n = samples.len();
    let t = samples.first().map_or(0, Vec::len);
    let mut out = String::from("period");
    for k in 0..n {
        out.push_str(&format!(",sample_{k}"));
    }
    out.push('\n');
    for i in 0..t {
        out.push_str(&i.to_string());
        for sample in samples {
            out.push_str(&format!(",{}", sample[i]));
        }
        out.push('\n');
    }
    f.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}

/// Write the three instance tables into `dir`.
pub fn write_instance_files(instance: &ComplexInstance, dir: &Path) -> Result<(), IngestError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    write_loads_csv(&instance.loads, &dir.join("loads.csv"))?;
    write_tariff_csv(&instance.tariff, &dir.join("tariff.csv"))?;
    write_pv_samples_csv(&instance.pv_samples.samples, &dir.join("pv_samples.csv"))
}

/// Write `config.toml` next to tables produced by [`write_instance_files`],
/// so the directory round-trips through [`load_instance`].
pub fn write_instance_config(instance: &ComplexInstance, dir: &Path) -> Result<PathBuf, IngestError> {
    let outages: Vec<usize> = instance
        .grid_limits
        .outage_mask
        .iter()
        .enumerate()
        .filter(|(_, &on)| on)
        .map(|(t, _)| t)
        .collect();
    let config = InstanceConfig {
        instance: InstanceSection {
            source: SourceKind::Files,
            step_hours: Some(instance.time_grid.step_hours),
        },
        files: Some(FilesSection {
            loads: "loads.csv".into(),
            pv_samples: "pv_samples.csv".into(),
            tariff: "tariff.csv".into(),
        }),
        synthetic: None,
        pv: Some(PvSection { lcoe: instance.tariff.pv_lcoe }),
        grid: Some(GridSection {
            max_exchange_kw: Some(instance.grid_limits.max_exchange),
            outage_periods: Some(outages),
        }),
        battery: Some(BatterySection {
            power_cap_kw: Some(instance.battery.power_cap),
            efficiency: Some(instance.battery.efficiency),
            duration_hours: None,
            soc_min_kwh: Some(instance.battery.soc_min),
            soc_max_kwh: Some(instance.battery.soc_max),
            soc_initial_kwh: Some(instance.battery.soc_initial),
            scale: Some(instance.battery.scale),
        }),
        penalties: Some(PenaltiesSection {
            residential: instance.penalties.residential,
            commercial: instance.penalties.commercial,
            residential_common: instance.penalties.residential_common,
        }),
        ev: Some(
            instance
                .ev_sessions
                .iter()
                .map(|e| EvSection {
                    capacity_kwh: e.capacity,
                    charger_power_kw: e.charger_power,
                    efficiency: e.efficiency,
                    arrival_period: e.arrival_period,
                    departure_period: e.departure_period,
                    soc_arrival: e.soc_arrival,
                    soc_departure: e.soc_departure,
                    soc_min: e.soc_min,
                    soc_max: e.soc_max,
                })
                .collect(),
        ),
        options: Some(OptionsSection {
            shedding_enabled: Some(instance.shedding_enabled),
            ev_discharge_enabled: Some(instance.ev_discharge_enabled),
        }),
        base_dir: dir.to_path_buf(),
    };
    let text = toml::to_string_pretty(&config)
        .map_err(|e| IngestError::Config(format!("cannot serialize config: {e}")))?;
    let path = dir.join("config.toml");
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

fn schedule_header(n_ev: usize) -> String {
    let mut header = String::from(
        "period,grid_buy_res,grid_buy_com,grid_sell_com,pv_total,pv_res,pv_com,pv_curtailed,\
         bes_charge_res,bes_charge_com,bes_discharge_res,bes_discharge_com,bes_soc,\
         shed_res,shed_com,shed_rescom",
    );
    for i in 0..n_ev {
        header.push_str(&format!(",ev{i}_charge,ev{i}_discharge,ev{i}_soc"));
    }
    header
}

/// Write one row per period in a fixed column order. Numbers use the
/// shortest f64-round-trip representation, so parsing the file back
/// reproduces the schedule exactly.
pub fn write_schedule_csv(schedule: &Schedule, path: &Path) -> Result<(), IngestError> {
    let mut f = create_file(path)?;
    let n_ev = schedule.ev_charge.len();
    let mut out = schedule_header(n_ev);
    out.push('\n');
    for t in 0..schedule.horizon() {
        out.push_str(&format!(
            "{t},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            schedule.grid_buy_res[t],
            schedule.grid_buy_com[t],
            schedule.grid_sell_com[t],
            schedule.pv_total[t],
            schedule.pv_res[t],
            schedule.pv_com[t],
            schedule.pv_curtailed[t],
            schedule.bes_charge_res[t],
            schedule.bes_charge_com[t],
            schedule.bes_discharge_res[t],
            schedule.bes_discharge_com[t],
            schedule.bes_soc[t],
            schedule.shed_res[t],
            schedule.shed_com[t],
            schedule.shed_rescom[t],
        ));
        for i in 0..n_ev {
            out.push_str(&format!(
                ",{},{},{}",
                schedule.ev_charge[i][t], schedule.ev_discharge[i][t], schedule.ev_soc[i][t]
            ));
        }
        out.push('\n');
    }
    f.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}

/// Parse a schedule table back. Cost terms are not part of the table and
/// come back zeroed.
pub fn read_schedule_csv(path: &Path) -> Result<Schedule, IngestError> {
    let mut reader = open_csv(path)?;
    let header = reader.headers().map_err(|e| parse_err(path, 1, e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    let fixed = 16;
    if names.len() < fixed || (names.len() - fixed) % 3 != 0 {
        return Err(parse_err(path, 1, "unexpected schedule header shape"));
    }
    let n_ev = (names.len() - fixed) / 3;
    if schedule_header(n_ev) != names.join(",") {
        return Err(parse_err(path, 1, "unexpected schedule column names"));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, (i + 2) as u64, e.to_string()))?;
        let line = record_line(&record, (i + 2) as u64);
        check_period(path, line, &record[0], i)?;
        let mut row = Vec::with_capacity(record.len() - 1);
        for (j, raw) in record.iter().enumerate().skip(1) {
            row.push(parse_field(path, line, names[j], raw)?);
        }
        rows.push(row);
    }
    let horizon = rows.len();
    let mut schedule = Schedule::zeros(horizon, n_ev);
    let column = |rows: &[Vec<f64>], j: usize| -> Vec<f64> { rows.iter().map(|r| r[j]).collect() };
    schedule.grid_buy_res = column(&rows, 0);
    schedule.grid_buy_com = column(&rows, 1);
    schedule.grid_sell_com = column(&rows, 2);
    schedule.pv_total = column(&rows, 3);
    schedule.pv_res = column(&rows, 4);
    schedule.pv_com = column(&rows, 5);
    schedule.pv_curtailed = column(&rows, 6);
    schedule.bes_charge_res = column(&rows, 7);
    schedule.bes_charge_com = column(&rows, 8);
    schedule.bes_discharge_res = column(&rows, 9);
    schedule.bes_discharge_com = column(&rows, 10);
    schedule.bes_soc = column(&rows, 11);
    schedule.shed_res = column(&rows, 12);
    schedule.shed_com = column(&rows, 13);
    schedule.shed_rescom = column(&rows, 14);
    for i in 0..n_ev {
        schedule.ev_charge[i] = column(&rows, 15 + 3 * i);
        schedule.ev_discharge[i] = column(&rows, 16 + 3 * i);
        schedule.ev_soc[i] = column(&rows, 17 + 3 * i);
    }
    Ok(schedule)
}
