//! Domain model of the apartment-complex microgrid and the pure arithmetic
//! shared by the optimizer and the analyses.
//!
//! All power values are kW, stored energy is kWh, rates are $/kWh, and the
//! time axis is `horizon_length` periods of `step_hours` each. Types are
//! plain immutable data after construction; every operation here is a pure
//! function.

use thiserror::Error;

/// Errors from the pure arithmetic helpers.
#[derive(Debug, Error)]
pub enum DomainError {
    #[error("efficiency must be in (0, 1], got {0}")]
    BadEfficiency(f64),
    #[error("time step must be positive, got {0}")]
    BadStep(f64),
    #[error("{0}")]
    Invalid(String),
}

/// Discretized horizon: `horizon_length` periods of `step_hours` hours.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    pub horizon_length: usize,
    pub step_hours: f64,
}

impl TimeGrid {
    pub fn hourly(horizon_length: usize) -> Self {
        Self { horizon_length, step_hours: 1.0 }
    }
}

/// Time-of-use rates for both customer classes plus the PV energy cost.
#[derive(Clone, Debug, PartialEq)]
pub struct Tariff {
    /// $/kWh billed on residential grid purchases, per period.
    pub residential_rate: Vec<f64>,
    /// $/kWh on commercial grid exchange (buy and sell), per period.
    pub commercial_rate: Vec<f64>,
    /// Levelized $/kWh assigned to dispatched PV energy.
    pub pv_lcoe: f64,
}

/// Demand per period, split by who is billed for it.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadProfile {
    pub residential: Vec<f64>,
    pub commercial: Vec<f64>,
    /// Common-area load of the residential buildings (corridors, lighting),
    /// billed through the commercial meter.
    pub residential_common: Vec<f64>,
}

impl LoadProfile {
    /// Total demand over the horizon in kWh.
    pub fn total_energy(&self, step_hours: f64) -> f64 {
        self.residential
            .iter()
            .zip(&self.commercial)
            .zip(&self.residential_common)
            .map(|((r, c), rc)| (r + c + rc) * step_hours)
            .sum()
    }
}

/// Point-of-interconnection limit and outage windows.
#[derive(Clone, Debug, PartialEq)]
pub struct GridLimits {
    /// Exchange limit in kW, applied to each of the three grid variables.
    pub max_exchange: f64,
    /// Periods during which all grid exchange is forced to zero.
    pub outage_mask: Vec<bool>,
}

impl GridLimits {
    pub fn unconstrained(horizon: usize, max_exchange: f64) -> Self {
        Self { max_exchange, outage_mask: vec![false; horizon] }
    }

    pub fn full_outage(horizon: usize, max_exchange: f64) -> Self {
        Self { max_exchange, outage_mask: vec![true; horizon] }
    }
}

/// Shared battery of the complex.
///
/// `scale` shrinks both the power rating and the energy window, which is
/// how the resilience study models smaller installations.
#[derive(Clone, Debug, PartialEq)]
pub struct BatterySpec {
    /// Power rating in kW, applied to the efficiency-adjusted charge and
    /// discharge rates.
    pub power_cap: f64,
    /// One-way efficiency in (0, 1]; applied on charge and on discharge.
    pub efficiency: f64,
    pub soc_min: f64,
    pub soc_max: f64,
    pub soc_initial: f64,
    pub scale: f64,
}

impl BatterySpec {
    /// Rating, duration-derived energy window, initial state at the floor.
    pub fn with_duration(power_cap: f64, efficiency: f64, duration_hours: f64) -> Self {
        Self {
            power_cap,
            efficiency,
            soc_min: 0.0,
            soc_max: power_cap * duration_hours,
            soc_initial: 0.0,
            scale: 1.0,
        }
    }

    pub fn none() -> Self {
        Self {
            power_cap: 0.0,
            efficiency: 1.0,
            soc_min: 0.0,
            soc_max: 0.0,
            soc_initial: 0.0,
            scale: 1.0,
        }
    }

    pub fn effective_power_cap(&self) -> f64 {
        self.power_cap * self.scale
    }

    pub fn effective_soc_min(&self) -> f64 {
        self.soc_min * self.scale
    }

    pub fn effective_soc_max(&self) -> f64 {
        self.soc_max * self.scale
    }

    pub fn effective_soc_initial(&self) -> f64 {
        self.soc_initial * self.scale
    }
}

/// One EV connected to a charger for a window of periods.
///
/// SOC pins are fractions of `capacity`; the session is anchored to
/// `soc_arrival` at the end of `arrival_period` and must reach
/// `soc_departure` by the end of `departure_period`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvSession {
    pub capacity: f64,
    pub charger_power: f64,
    pub efficiency: f64,
    pub arrival_period: usize,
    pub departure_period: usize,
    pub soc_arrival: f64,
    pub soc_departure: f64,
    pub soc_min: f64,
    pub soc_max: f64,
}

impl EvSession {
    pub fn charging_window(&self) -> usize {
        self.departure_period - self.arrival_period
    }
}

/// $/kWh penalties on involuntarily shed demand, per category.
#[derive(Clone, Debug, PartialEq)]
pub struct VollPenalties {
    pub residential: f64,
    pub commercial: f64,
    pub residential_common: f64,
}

impl Default for VollPenalties {
    /// Residential service sheds last, commercial first.
    fn default() -> Self {
        Self { residential: 10.0, commercial: 6.0, residential_common: 8.0 }
    }
}

/// Observed PV availability trajectories and the nominal profile used by
/// the deterministic model (the per-period empirical mean by default).
#[derive(Clone, Debug, PartialEq)]
pub struct PvSampleSet {
    pub samples: Vec<Vec<f64>>,
    pub nominal: Vec<f64>,
}

impl PvSampleSet {
    /// Build from samples, taking the per-period mean as nominal.
    pub fn from_samples(samples: Vec<Vec<f64>>) -> Self {
        let nominal = per_period_mean(&samples);
        Self { samples, nominal }
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    /// Per-period minimum over samples.
    pub fn per_period_min(&self) -> Vec<f64> {
        let t = self.samples.first().map_or(0, Vec::len);
        (0..t)
            .map(|i| self.samples.iter().map(|s| s[i]).fold(f64::INFINITY, f64::min))
            .collect()
    }

    /// Per-period empirical lower quantile: the (floor(alpha * N) + 1)-th
    /// smallest value, i.e. the largest bound undershot by at most a
    /// fraction alpha of the samples.
    pub fn per_period_quantile(&self, alpha: f64) -> Vec<f64> {
        let n = self.n_samples();
        let k = ((alpha * n as f64).floor() as usize).min(n - 1);
        let t = self.samples.first().map_or(0, Vec::len);
        (0..t)
            .map(|i| {
                let mut column: Vec<f64> = self.samples.iter().map(|s| s[i]).collect();
                column.sort_by(|a, b| a.partial_cmp(b).unwrap());
                column[k]
            })
            .collect()
    }
}

pub(crate) fn per_period_mean(samples: &[Vec<f64>]) -> Vec<f64> {
    let n = samples.len();
    let t = samples.first().map_or(0, Vec::len);
    (0..t).map(|i| samples.iter().map(|s| s[i]).sum::<f64>() / n as f64).collect()
}

/// Full scenario description consumed by the optimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexInstance {
    pub time_grid: TimeGrid,
    pub tariff: Tariff,
    pub loads: LoadProfile,
    pub grid_limits: GridLimits,
    pub battery: BatterySpec,
    pub ev_sessions: Vec<EvSession>,
    pub penalties: VollPenalties,
    pub pv_samples: PvSampleSet,
    /// When false, shedding variables are absent and demand must be met.
    pub shedding_enabled: bool,
    /// When true, EV discharge is released and feeds the commercial bus;
    /// off by default so charging is the only EV grid interaction.
    pub ev_discharge_enabled: bool,
}

/// Cost breakdown: one value per objective term, in order commercial
/// exchange, residential purchase, PV, then the three shedding penalties.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CostTerms {
    pub commercial_exchange: f64,
    pub residential_purchase: f64,
    pub pv: f64,
    pub shed_residential: f64,
    pub shed_commercial: f64,
    pub shed_residential_common: f64,
}

impl CostTerms {
    pub fn total(&self) -> f64 {
        self.commercial_exchange
            + self.residential_purchase
            + self.pv
            + self.shed_residential
            + self.shed_commercial
            + self.shed_residential_common
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.commercial_exchange,
            self.residential_purchase,
            self.pv,
            self.shed_residential,
            self.shed_commercial,
            self.shed_residential_common,
        ]
    }
}

/// Per-period dispatch of every decision variable plus the cost breakdown.
///
/// EV vectors have one entry per session and full horizon length; values
/// outside a session's window are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub grid_buy_res: Vec<f64>,
    pub grid_buy_com: Vec<f64>,
    pub grid_sell_com: Vec<f64>,
    pub pv_total: Vec<f64>,
    pub pv_res: Vec<f64>,
    pub pv_com: Vec<f64>,
    pub pv_curtailed: Vec<f64>,
    pub bes_charge_res: Vec<f64>,
    pub bes_charge_com: Vec<f64>,
    pub bes_discharge_res: Vec<f64>,
    pub bes_discharge_com: Vec<f64>,
    pub bes_soc: Vec<f64>,
    pub ev_charge: Vec<Vec<f64>>,
    pub ev_discharge: Vec<Vec<f64>>,
    pub ev_soc: Vec<Vec<f64>>,
    pub shed_res: Vec<f64>,
    pub shed_com: Vec<f64>,
    pub shed_rescom: Vec<f64>,
    pub cost_terms: CostTerms,
    pub total_cost: f64,
}

impl Schedule {
    pub fn zeros(horizon: usize, n_ev: usize) -> Self {
        Self {
            grid_buy_res: vec![0.0; horizon],
            grid_buy_com: vec![0.0; horizon],
            grid_sell_com: vec![0.0; horizon],
            pv_total: vec![0.0; horizon],
            pv_res: vec![0.0; horizon],
            pv_com: vec![0.0; horizon],
            pv_curtailed: vec![0.0; horizon],
            bes_charge_res: vec![0.0; horizon],
            bes_charge_com: vec![0.0; horizon],
            bes_discharge_res: vec![0.0; horizon],
            bes_discharge_com: vec![0.0; horizon],
            bes_soc: vec![0.0; horizon],
            ev_charge: vec![vec![0.0; horizon]; n_ev],
            ev_discharge: vec![vec![0.0; horizon]; n_ev],
            ev_soc: vec![vec![0.0; horizon]; n_ev],
            shed_res: vec![0.0; horizon],
            shed_com: vec![0.0; horizon],
            shed_rescom: vec![0.0; horizon],
            cost_terms: CostTerms::default(),
            total_cost: 0.0,
        }
    }

    pub fn horizon(&self) -> usize {
        self.grid_buy_res.len()
    }

    /// True when the schedule never purchases from the grid.
    pub fn is_grid_independent(&self) -> bool {
        self.grid_buy_res.iter().chain(&self.grid_buy_com).all(|&p| p <= 1e-6)
    }
}

/// Outcome of instance validation: every broken invariant, by name.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            write!(f, "ok")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

/// One step of the storage state recursion:
/// `soc + (charge * efficiency - discharge / efficiency) * dt`.
pub fn soc_update(
    soc_prev: f64,
    charge: f64,
    discharge: f64,
    efficiency: f64,
    dt: f64,
) -> Result<f64, DomainError> {
    if efficiency <= 0.0 || efficiency > 1.0 {
        return Err(DomainError::BadEfficiency(efficiency));
    }
    if dt <= 0.0 {
        return Err(DomainError::BadStep(dt));
    }
    Ok(soc_prev + (charge * efficiency - discharge / efficiency) * dt)
}

/// Price of electricity expressed as $/gallon of gasoline for a vehicle
/// of the given fuel economy versus an EV of the given efficiency.
pub fn gasoline_equivalent(
    elec_price: f64,
    vehicle_mpg: f64,
    ev_efficiency: f64,
) -> Result<f64, DomainError> {
    if ev_efficiency <= 0.0 {
        return Err(DomainError::Invalid(format!(
            "EV efficiency must be positive, got {ev_efficiency}"
        )));
    }
    if vehicle_mpg <= 0.0 {
        return Err(DomainError::Invalid(format!(
            "vehicle fuel economy must be positive, got {vehicle_mpg}"
        )));
    }
    if elec_price < 0.0 {
        return Err(DomainError::Invalid(format!(
            "electricity price must be non-negative, got {elec_price}"
        )));
    }
    Ok(elec_price * vehicle_mpg / ev_efficiency)
}

/// Check every structural invariant of an instance. All problems are
/// reported, none thrown.
pub fn validate_instance(instance: &ComplexInstance) -> ValidationReport {
    let mut v = Vec::new();
    let t = instance.time_grid.horizon_length;
    if t == 0 {
        v.push("time grid: horizon must have at least one period".to_string());
    }
    if instance.time_grid.step_hours <= 0.0 {
        v.push(format!("time grid: step must be positive, got {}", instance.time_grid.step_hours));
    }

    let mut check_len = |name: &str, len: usize| {
        if len != t {
            v.push(format!("{name}: length {len} does not match horizon {t}"));
        }
    };
    check_len("tariff.residential_rate", instance.tariff.residential_rate.len());
    check_len("tariff.commercial_rate", instance.tariff.commercial_rate.len());
    check_len("loads.residential", instance.loads.residential.len());
    check_len("loads.commercial", instance.loads.commercial.len());
    check_len("loads.residential_common", instance.loads.residential_common.len());
    check_len("grid_limits.outage_mask", instance.grid_limits.outage_mask.len());
    check_len("pv_samples.nominal", instance.pv_samples.nominal.len());
    for (k, s) in instance.pv_samples.samples.iter().enumerate() {
        if s.len() != t {
            v.push(format!("pv_samples.samples[{k}]: length {} does not match horizon {t}", s.len()));
        }
    }

    let mut check_nonneg = |name: &str, values: &[f64]| {
        if let Some((i, bad)) = values.iter().enumerate().find(|(_, x)| **x < 0.0 || !x.is_finite())
        {
            v.push(format!("{name}[{i}]: must be finite and non-negative, got {bad}"));
        }
    };
    check_nonneg("tariff.residential_rate", &instance.tariff.residential_rate);
    check_nonneg("tariff.commercial_rate", &instance.tariff.commercial_rate);
    check_nonneg("loads.residential", &instance.loads.residential);
    check_nonneg("loads.commercial", &instance.loads.commercial);
    check_nonneg("loads.residential_common", &instance.loads.residential_common);
    check_nonneg("pv_samples.nominal", &instance.pv_samples.nominal);
    for (k, s) in instance.pv_samples.samples.iter().enumerate() {
        check_nonneg(&format!("pv_samples.samples[{k}]"), s);
    }
    if instance.tariff.pv_lcoe < 0.0 {
        v.push(format!("tariff.pv_lcoe: must be non-negative, got {}", instance.tariff.pv_lcoe));
    }
    if instance.pv_samples.samples.is_empty() {
        v.push("pv_samples: at least one sample is required".to_string());
    }

    if instance.grid_limits.max_exchange < 0.0 {
        v.push(format!(
            "grid_limits.max_exchange: must be non-negative, got {}",
            instance.grid_limits.max_exchange
        ));
    }

    let b = &instance.battery;
    if b.efficiency <= 0.0 || b.efficiency > 1.0 {
        v.push(format!("battery.efficiency: must be in (0, 1], got {}", b.efficiency));
    }
    if b.power_cap < 0.0 {
        v.push(format!("battery.power_cap: must be non-negative, got {}", b.power_cap));
    }
    if b.scale <= 0.0 {
        v.push(format!("battery.scale: must be positive, got {}", b.scale));
    }
    if !(0.0 <= b.soc_min && b.soc_min <= b.soc_initial && b.soc_initial <= b.soc_max) {
        v.push(format!(
            "battery SOC bounds: need 0 <= min <= initial <= max, got min {} initial {} max {}",
            b.soc_min, b.soc_initial, b.soc_max
        ));
    }

    for (i, ev) in instance.ev_sessions.iter().enumerate() {
        let name = format!("ev[{i}]");
        if ev.capacity <= 0.0 {
            v.push(format!("{name}: capacity must be positive, got {}", ev.capacity));
        }
        if ev.charger_power < 0.0 {
            v.push(format!("{name}: charger power must be non-negative, got {}", ev.charger_power));
        }
        if ev.efficiency <= 0.0 || ev.efficiency > 1.0 {
            v.push(format!("{name}: efficiency must be in (0, 1], got {}", ev.efficiency));
        }
        if !(ev.arrival_period < ev.departure_period && ev.departure_period < t.max(1)) {
            v.push(format!(
                "{name}: need arrival < departure < horizon, got {} -> {} with horizon {t}",
                ev.arrival_period, ev.departure_period
            ));
            continue;
        }
        for (label, soc) in [("arrival", ev.soc_arrival), ("departure", ev.soc_departure)] {
            if !(ev.soc_min <= soc && soc <= ev.soc_max) {
                v.push(format!(
                    "{name}: {label} SOC {soc} outside [{}, {}]",
                    ev.soc_min, ev.soc_max
                ));
            }
        }
        let needed = (ev.soc_departure - ev.soc_arrival) * ev.capacity;
        let available = ev.charger_power
            * ev.efficiency
            * instance.time_grid.step_hours
            * ev.charging_window() as f64;
        if needed > available + 1e-9 {
            v.push(format!(
                "{name}: departure SOC unreachable, needs {needed:.3} kWh but the charger \
                 delivers at most {available:.3} kWh in its window"
            ));
        }
    }

    ValidationReport { violations: v }
}
