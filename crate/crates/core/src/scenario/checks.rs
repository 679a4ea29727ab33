use num_complex::Complex64;
use serde_json::{json, Value};

use super::config::{CheckName, ScenarioConfig, StateKind};
use super::report::{CheckRecord, Diagnostics, Metric};
use crate::blip::{self, BlipState, RegularisationKernel};
use crate::classical::{self, ClassicalWavePacket, WorldlineBox, EDGE_DECAY_LIMIT};
use crate::error::{Error, Result};
use crate::finite_part::FinitePartQuadrature;
use crate::grid::{self, Axis, Interpolation, ResampleDiagnostics, SampledFunction, LEAKAGE_THRESHOLD};
use crate::kinematics::{self, Direction};
use crate::spectral;

/// Closed-form profile `a exp(-(x - c)^2 / 2w^2) exp(i s k0 x)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Profile {
    pub center: f64,
    pub width: f64,
    pub carrier_k: f64,
    pub amplitude: f64,
    pub s: Direction,
}

impl Profile {
    pub fn eval(&self, x: f64) -> Complex64 {
        let d = (x - self.center) / self.width;
        Complex64::from_polar(
            self.amplitude * (-0.5 * d * d).exp(),
            self.s.s() * self.carrier_k * x,
        )
    }
}

/// Immutable state shared by every check of one run.
pub(crate) struct Context<'a> {
    pub config: &'a ScenarioConfig,
    pub axis: Axis,
    /// Alice's field profile.
    pub field: SampledFunction,
    pub profile: Option<Profile>,
}

impl<'a> Context<'a> {
    pub fn build(config: &'a ScenarioConfig) -> Result<Self> {
        let st = &config.state;
        let (field, profile) = match st.kind {
            StateKind::Custom => {
                let path = st.file.as_ref().expect("custom state has a file");
                let f = SampledFunction::load_csv(path, st.s, st.lambda)?;
                if let Some(g) = &config.grid {
                    let a = f.axis();
                    if a.count() != g.count() || (a.step() - g.step()).abs() > 1e-9 * g.step() {
                        return Err(Error::MalformedSamples {
                            path: path.clone(),
                            reason: format!("samples lie on {a} but the config grid is {g}"),
                        });
                    }
                }
                if f.max_abs() == 0.0 {
                    return Err(Error::MalformedSamples {
                        path: path.clone(),
                        reason: "all samples are zero".into(),
                    });
                }
                (f, None)
            }
            StateKind::Gaussian | StateKind::GaussianCarrier => {
                let p = Profile {
                    center: st.center,
                    width: st.width,
                    carrier_k: st.carrier_k,
                    amplitude: st.amplitude,
                    s: st.s,
                };
                let axis = config.grid.expect("analytic state has a grid");
                (
                    SampledFunction::from_fn(axis, st.s, st.lambda, |x| p.eval(x)),
                    Some(p),
                )
            }
        };
        Ok(Self {
            config,
            axis: *field.axis(),
            field,
            profile,
        })
    }

    fn s(&self) -> Direction {
        self.field.s()
    }

    fn packet(&self) -> Result<ClassicalWavePacket> {
        ClassicalWavePacket::single(self.field.clone(), self.config.constants)
    }

    /// The same profile normalised to one photon.
    fn blip(&self) -> Result<BlipState> {
        let norm = self.field.norm();
        BlipState::single(self.field.scaled(1.0 / norm), self.config.constants)
    }

    pub fn run(&self, check: CheckName) -> CheckRecord {
        let tol = self.config.tolerance(check);
        let result = match check {
            CheckName::DopplerCentroid => self.doppler_centroid(tol),
            CheckName::BoxEnergyConservation => self.box_energy_conservation(tol),
            CheckName::NaiveEnergyRatio => self.naive_energy_ratio(tol),
            CheckName::PhotonNumberConservation => self.photon_number_conservation(tol),
            CheckName::MomentumPathCommutativity => self.momentum_path_commutativity(tol),
            CheckName::KernelConsistency => self.kernel_consistency(tol),
            CheckName::Parseval => self.parseval(tol),
            CheckName::SignalExchange => self.signal_exchange(tol),
            CheckName::Reciprocity => self.reciprocity(tol),
        };
        result.unwrap_or_else(|e| CheckRecord::errored(check.name(), tol, e.to_string()))
    }

    fn doppler_centroid(&self, tol: f64) -> Result<CheckRecord> {
        let packet = self.packet()?;
        let s = self.s();
        let spec_a = classical::spectrum(&packet, s)?;
        let k_axis = spec_a.function.axis();
        let ca = spec_a
            .centroid
            .filter(|c| c.abs() > 1e-9 * k_axis.nyquist())
            .ok_or_else(|| {
                Error::InvalidParameter(
                    "spectral centroid is zero, so the centroid ratio is undefined".into(),
                )
            })?;
        let mut agg = Aggregate::new(Metric::Absolute);
        for boost in &self.config.boosts {
            let b = classical::boost_packet(&packet, boost, &self.axis)?;
            let cb = classical::spectrum(&b.packet, s)?.centroid.unwrap_or(f64::NAN);
            agg.resampled(b.diagnostics);
            agg.edge(b.packet.electric(s)?.edge_decay());
            agg.add(
                boost.xi(s),
                cb / ca,
                detail(&[("beta", boost.beta()), ("centroid_a", ca), ("centroid_b", cb)]),
            );
        }
        agg.edge(self.field.edge_decay());
        Ok(agg.finish(CheckName::DopplerCentroid, tol, Diagnostics::new()))
    }

    /// Smallest grid interval holding every sample above `1e-10` of the peak,
    /// padded by four steps.
    fn support_box(&self) -> Result<WorldlineBox> {
        let floor = 1e-10 * self.field.max_abs();
        let v = self.field.values();
        let first = v.iter().position(|z| z.norm() > floor).unwrap_or(0);
        let last = v.iter().rposition(|z| z.norm() > floor).unwrap_or(v.len() - 1);
        let a1 = self.axis.point(first.saturating_sub(4));
        let a2 = self.axis.point((last + 4).min(v.len() - 1));
        let k = &self.config.constants;
        WorldlineBox::new(a1, a2, self.config.h_density, k.area, k.epsilon)
    }

    fn box_energy_conservation(&self, tol: f64) -> Result<CheckRecord> {
        let packet = self.packet()?;
        let s = self.s();
        let bx = self.support_box()?;
        let e_a = classical::box_energy(&packet, &bx)?;
        let mut agg = Aggregate::new(Metric::Relative);
        for boost in &self.config.boosts {
            let b = classical::boost_packet(&packet, boost, &self.axis)?;
            let bx_b = bx.boosted(s, boost);
            let e_b = classical::box_energy(&b.packet, &bx_b)?;
            agg.resampled(b.diagnostics);
            agg.edge(b.packet.electric(s)?.edge_decay());
            agg.add(
                e_a,
                e_b,
                detail(&[
                    ("beta", boost.beta()),
                    ("box_b_a1", bx_b.a1),
                    ("box_b_a2", bx_b.a2),
                    ("h_b", bx_b.h),
                ]),
            );
        }
        let extra = detail(&[("box_a1", bx.a1), ("box_a2", bx.a2), ("h_a", bx.h)]);
        Ok(agg.finish(CheckName::BoxEnergyConservation, tol, extra))
    }

    fn naive_energy_ratio(&self, tol: f64) -> Result<CheckRecord> {
        let packet = self.packet()?;
        let s = self.s();
        let e_a = classical::total_energy(&packet);
        let mut agg = Aggregate::new(Metric::Absolute);
        agg.edge(e_a.edge_decay);
        for boost in &self.config.boosts {
            let b = classical::boost_packet(&packet, boost, &self.axis)?;
            let e_b = classical::total_energy(&b.packet);
            agg.resampled(b.diagnostics);
            agg.edge(e_b.edge_decay);
            agg.add(
                boost.xi(s),
                e_b.energy / e_a.energy,
                detail(&[
                    ("beta", boost.beta()),
                    ("energy_a", e_a.energy),
                    ("energy_b", e_b.energy),
                ]),
            );
        }
        Ok(agg.finish(CheckName::NaiveEnergyRatio, tol, Diagnostics::new()))
    }

    fn photon_number_conservation(&self, tol: f64) -> Result<CheckRecord> {
        let state = self.blip()?;
        let n_a = blip::photon_number(&state);
        let mut agg = Aggregate::new(Metric::Relative);
        for boost in &self.config.boosts {
            let b = blip::boost_blip(&state, boost, &self.axis)?;
            agg.resampled(b.diagnostics);
            agg.add(
                n_a,
                blip::photon_number(&b.state),
                detail(&[("beta", boost.beta())]),
            );
        }
        Ok(agg.finish(CheckName::PhotonNumberConservation, tol, Diagnostics::new()))
    }

    fn momentum_path_commutativity(&self, tol: f64) -> Result<CheckRecord> {
        let state = self.blip()?;
        let (s, lambda) = (self.s(), self.field.lambda());
        let momentum = blip::to_momentum_state(&state)?;
        let k_axis = self.axis.conjugate();
        let mut agg = Aggregate::new(Metric::Absolute);
        for boost in &self.config.boosts {
            let via_position = blip::boost_blip(&state, boost, &self.axis)?;
            let lhs = blip::to_momentum_state(&via_position.state)?;
            let rhs = blip::boost_momentum_state(&momentum, boost, &k_axis)?;
            agg.resampled(via_position.diagnostics.merge(rhs.diagnostics));
            let d = grid::l2_distance(lhs.channel(s, lambda)?, rhs.state.channel(s, lambda)?)?;
            agg.add(0.0, d, detail(&[("beta", boost.beta())]));
        }
        Ok(agg.finish(CheckName::MomentumPathCommutativity, tol, Diagnostics::new()))
    }

    fn kernel_consistency(&self, tol: f64) -> Result<CheckRecord> {
        let state = self.blip()?;
        let k = &self.config.constants;
        let kernel = RegularisationKernel::new(self.axis, k)?;
        let mut agg = Aggregate::new(Metric::Absolute);
        for boost in &self.config.boosts {
            let r = blip::kernel_consistency_check(&state, boost, &self.axis)?;
            agg.resampled(r.diagnostics);
            agg.add(0.0, r.discrepancy, detail(&[("beta", boost.beta())]));
        }

        let mut extra = Diagnostics::new();
        let top = kernel
            .multiplier()
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or_default();
        let sign = if top.re > 0.0 { "positive" } else { "negative" };
        extra.insert("multiplier_sign".into(), json!(sign));
        let (k_near, m_near) = multiplier_near(&kernel, 1.0);
        extra.insert("multiplier_sample".into(), json!({ "k": k_near, "m": m_near }));
        match self.profile {
            Some(p) => {
                let scaled = Profile {
                    amplitude: p.amplitude / self.field.norm(),
                    ..p
                };
                let field = blip::field_matrix_element_with(&kernel, &state, self.s())?;
                let oracle = oracle_rel_error(&scaled, &field, &kernel, k.c);
                extra.insert("oracle_rel_error".into(), json!(oracle));
            }
            None => {
                extra.insert(
                    "oracle_rel_error".into(),
                    json!("not evaluated for sampled profiles"),
                );
            }
        }
        Ok(agg.finish(CheckName::KernelConsistency, tol, extra))
    }

    fn parseval(&self, tol: f64) -> Result<CheckRecord> {
        let mut agg = Aggregate::new(Metric::Relative);
        let mut entry = |f: &SampledFunction, beta: Option<f64>| -> Result<()> {
            let r = spectral::parseval_check(f)?;
            let back = spectral::to_position(&spectral::to_momentum(f)?)?;
            let round_trip = grid::relative_l2(&back, f)?;
            let mut d = detail(&[("round_trip_rel_error", round_trip)]);
            d.insert("beta".into(), beta.map_or(json!("unboosted"), |b| json!(b)));
            agg.add(r.position_norm, r.momentum_norm, d);
            Ok(())
        };
        entry(&self.field, None)?;
        let mut resample = ResampleDiagnostics::clean();
        for boost in &self.config.boosts {
            let xi = boost.xi(self.s());
            let b = grid::resample(&self.field, xi, xi, &self.axis, Interpolation::BandLimited)?;
            resample = resample.merge(b.diagnostics);
            entry(&b.function, Some(boost.beta()))?;
        }
        agg.resampled(resample);
        Ok(agg.finish(CheckName::Parseval, tol, Diagnostics::new()))
    }

    fn signal_exchange(&self, tol: f64) -> Result<CheckRecord> {
        let mut agg = Aggregate::new(Metric::Relative);
        for boost in &self.config.boosts {
            let r = kinematics::simulate_signal_exchange(boost, 1.0, self.config.constants.c)?;
            let mut d = detail(&[("beta", boost.beta())]);
            d.insert("quantity".into(), json!("kappa"));
            agg.add(boost.kappa(Direction::Right), r.kappa_measured, d.clone());
            d.insert("quantity".into(), json!("gamma"));
            agg.add(boost.gamma(), r.gamma_inferred, d);
        }
        Ok(agg.finish(CheckName::SignalExchange, tol, Diagnostics::new()))
    }

    fn reciprocity(&self, tol: f64) -> Result<CheckRecord> {
        let mut agg = Aggregate::new(Metric::Absolute);
        for boost in &self.config.boosts {
            let inv = boost.inverse();
            for s in Direction::BOTH {
                let rows = [
                    ("xi(beta) xi(-beta)", boost.xi(s) * inv.xi(s)),
                    ("kappa(beta) kappa(-beta)", boost.kappa(s) * inv.kappa(s)),
                    ("kappa xi", boost.kappa(s) * boost.xi(s)),
                ];
                for (relation, product) in rows {
                    let mut d = detail(&[("beta", boost.beta()), ("s", s.s())]);
                    d.insert("relation".into(), json!(relation));
                    agg.add(1.0, product, d);
                }
            }
        }
        Ok(agg.finish(CheckName::Reciprocity, tol, Diagnostics::new()))
    }
}

fn detail(pairs: &[(&str, f64)]) -> Diagnostics {
    pairs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()
}

/// Tabulated multiplier at the grid wavenumber nearest `k`, as `(k, m)`.
fn multiplier_near(kernel: &RegularisationKernel, k: f64) -> (f64, f64) {
    let axis = kernel.k_axis();
    let i = (((k - axis.start()) / axis.step()).round().max(0.0) as usize).min(axis.count() - 1);
    (axis.point(i), kernel.multiplier()[i].re)
}

/// Relative L2 error of the spectral field against direct finite-part
/// quadrature of the closed-form profile, on 16 grid points within two
/// widths of the centre.
fn oracle_rel_error(p: &Profile, field: &SampledFunction, kernel: &RegularisationKernel, c: f64) -> f64 {
    let axis = field.axis();
    let cutoff = 12.0 * p.width;
    let panels = (cutoff * (2.0 * p.carrier_k.abs() + 4.0 / p.width)).ceil() as usize + 200;
    let quad = FinitePartQuadrature::new(cutoff, panels, 8);
    let scale = c * kernel.prefactor();
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..16 {
        let x = p.center - 2.0 * p.width + 4.0 * p.width * j as f64 / 15.0;
        let i = ((x - axis.start()) / axis.step()).round();
        if i < 0.0 || i >= axis.count() as f64 {
            continue;
        }
        let i = i as usize;
        let oracle = quad.apply(&|u| p.eval(u), axis.point(i)) * scale;
        num += (field.values()[i] - oracle).norm_sqr();
        den += oracle.norm_sqr();
    }
    (num / den).sqrt()
}

/// Folds per-boost measurements into one record that reports the worst one.
struct Aggregate {
    metric: Metric,
    worst: Option<(f64, f64, f64, Diagnostics)>,
    rows: Vec<Value>,
    resample: Option<ResampleDiagnostics>,
    edge_decay: Option<f64>,
}

impl Aggregate {
    fn new(metric: Metric) -> Self {
        Self {
            metric,
            worst: None,
            rows: Vec::new(),
            resample: None,
            edge_decay: None,
        }
    }

    fn error(&self, expected: f64, measured: f64) -> f64 {
        let e = (measured - expected).abs();
        let e = match self.metric {
            Metric::Absolute => e,
            Metric::Relative => e / expected.abs(),
        };
        if e.is_nan() {
            f64::INFINITY
        } else {
            e
        }
    }

    fn add(&mut self, expected: f64, measured: f64, detail: Diagnostics) {
        let err = self.error(expected, measured);
        let mut row = detail.clone();
        row.insert("expected".into(), json!(expected));
        row.insert("measured".into(), json!(measured));
        self.rows.push(Value::Object(row.into_iter().collect()));
        if self.worst.as_ref().is_none_or(|w| err > w.0) {
            self.worst = Some((err, expected, measured, detail));
        }
    }

    fn resampled(&mut self, d: ResampleDiagnostics) {
        self.resample = Some(match self.resample {
            Some(r) => r.merge(d),
            None => d,
        });
    }

    fn edge(&mut self, decay: f64) {
        self.edge_decay = Some(self.edge_decay.map_or(decay, |e| e.max(decay)));
    }

    fn finish(self, check: CheckName, tol: f64, mut diagnostics: Diagnostics) -> CheckRecord {
        let Some((_, expected, measured, worst)) = self.worst else {
            return CheckRecord::errored(check.name(), tol, "nothing to measure".into());
        };
        diagnostics.insert("worst".into(), Value::Object(worst.into_iter().collect()));
        diagnostics.insert("entries".into(), Value::Array(self.rows));
        if let Some(e) = self.edge_decay {
            diagnostics.insert("edge_decay".into(), json!(e));
            diagnostics.insert("edge_warning".into(), json!(e > EDGE_DECAY_LIMIT));
        }
        if let Some(r) = self.resample {
            diagnostics.insert("leakage".into(), json!(r.leakage));
            diagnostics.insert("truncated".into(), json!(r.truncated));
            diagnostics.insert("band_limit_warning".into(), json!(r.band_limit_warning));
        }
        let mut record =
            CheckRecord::measured(check.name(), expected, measured, self.metric, tol, diagnostics);
        if let Some(r) = self.resample.filter(|r| r.band_limit_warning) {
            record.mark_errored(format!(
                "band limit violated: leakage {:e} exceeds {LEAKAGE_THRESHOLD:e}",
                r.leakage
            ));
        }
        record
    }
}
