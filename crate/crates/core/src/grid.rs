//! Uniformly sampled complex functions on a light-cone (`chi`) or wavenumber
//! (`k`) axis, with band-limited resampling for boost rescalings.

use std::f64::consts::PI;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::Direction;

/// Fraction of spectral energy above the target band at which resampling
/// flags a band-limit warning.
pub const LEAKAGE_THRESHOLD: f64 = 1e-6;

/// A uniform grid `start + i * step`, `0 <= i < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    start: f64,
    step: f64,
    count: usize,
}

impl Axis {
    /// Grids must have a positive step and an even number (at least two) of
    /// points.
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() {
            return Err(Error::InvalidAxis(format!("start must be finite, got {start}")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidAxis(format!("step must be positive, got {step}")));
        }
        if count < 2 || !count.is_multiple_of(2) {
            return Err(Error::InvalidAxis(format!(
                "count must be even and at least 2, got {count}"
            )));
        }
        Ok(Self { start, step, count })
    }

    /// A grid of `count` points centred on zero: `start = -count/2 * step`.
    pub fn centered(step: f64, count: usize) -> Result<Self> {
        Axis::new(-(count as f64 / 2.0) * step, step, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    /// Last grid point.
    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start && x <= self.end()
    }

    /// Period of the discrete Fourier basis on this grid.
    pub fn period(&self) -> f64 {
        self.count as f64 * self.step
    }

    /// The Fourier-conjugate axis: `step' = 2 pi / (count * step)` with the
    /// same count, centred so both signs are present.
    pub fn conjugate(&self) -> Axis {
        let step = 2.0 * PI / self.period();
        Axis::centered(step, self.count).expect("conjugate of a valid axis is valid")
    }

    /// Largest wavenumber this grid resolves.
    pub fn nyquist(&self) -> f64 {
        PI / self.step
    }

    fn same_as(&self, other: &Axis) -> bool {
        let tol = 1e-12 * self.step;
        self.count == other.count
            && (self.step - other.step).abs() <= tol
            && (self.start - other.start).abs() <= tol.max(1e-12 * self.start.abs())
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} + i*{}, i < {}]", self.start, self.step, self.count)
    }
}

/// Which variable the samples are a function of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    PositionChi,
    MomentumK,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::PositionChi => "position",
            Representation::MomentumK => "momentum",
        }
    }
}

/// Linear polarization orthogonal to the propagation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn name(self) -> &'static str {
        match self {
            Polarization::H => "H",
            Polarization::V => "V",
        }
    }
}

impl std::str::FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Polarization::H),
            "V" | "v" => Ok(Polarization::V),
            other => Err(Error::InvalidPolarization(other.to_string())),
        }
    }
}

/// Interpolation used by [`resample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Trigonometric interpolation of the periodic band-limited extension.
    #[default]
    BandLimited,
    /// Keys cubic convolution (a = -1/2).
    Cubic,
}

/// Complex samples on an axis, tagged with representation, direction and
/// polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    axis: Axis,
    values: Vec<Complex64>,
    representation: Representation,
    s: Direction,
    lambda: Polarization,
    // Start of the position grid a momentum function transforms back onto.
    // Unused for position functions.
    origin: f64,
}

impl SampledFunction {
    pub fn new(
        axis: Axis,
        values: Vec<Complex64>,
        representation: Representation,
        s: Direction,
        lambda: Polarization,
    ) -> Result<Self> {
        if values.len() != axis.count() {
            return Err(Error::LengthMismatch {
                axis: axis.count(),
                values: values.len(),
            });
        }
        let origin = match representation {
            Representation::PositionChi => axis.start(),
            Representation::MomentumK => -(axis.count() as f64 / 2.0) * 2.0 * PI / axis.period(),
        };
        Ok(Self {
            axis,
            values,
            representation,
            s,
            lambda,
            origin,
        })
    }

    /// Samples `f` at every point of a position axis.
    pub fn from_fn(axis: Axis, s: Direction, lambda: Polarization, f: impl Fn(f64) -> Complex64) -> Self {
        let values = axis.points().map(f).collect();
        Self::new(axis, values, Representation::PositionChi, s, lambda)
            .expect("length matches by construction")
    }

    pub fn zeros(axis: Axis, representation: Representation, s: Direction, lambda: Polarization) -> Self {
        Self::new(
            axis,
            vec![Complex64::new(0.0, 0.0); axis.count()],
            representation,
            s,
            lambda,
        )
        .expect("length matches by construction")
    }

    /// Sets the start of the position grid that a momentum function maps
    /// back onto under the inverse transform.
    pub fn with_origin(mut self, origin: f64) -> Self {
        if self.representation == Representation::MomentumK {
            self.origin = origin;
        }
        self
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn s(&self) -> Direction {
        self.s
    }

    pub fn lambda(&self) -> Polarization {
        self.lambda
    }

    /// For a momentum function, the start of its conjugate position grid.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Same tags and axis, new samples.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        let mut out = Self::new(self.axis, values, self.representation, self.s, self.lambda)?;
        out.origin = self.origin;
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self
            .axis
            .points()
            .zip(&self.values)
            .map(|(x, &v)| f(x, v))
            .collect();
        self.with_values(values).expect("length preserved")
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|_, v| v * factor)
    }

    /// `step * sum |f_i|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.axis.step() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Ratio of the largest magnitude among the outermost samples to the
    /// peak magnitude. Zero for the zero function.
    pub fn edge_decay(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.values.len();
        let first = self.values[0].norm();
        let last = self.values[n - 1].norm();
        first.max(last) / peak
    }

    /// Band-limited value at an arbitrary coordinate inside the grid, by a
    /// direct trigonometric sum.
    pub fn interpolate(&self, x: f64) -> Result<Complex64> {
        if !self.axis.contains(x) {
            return Err(Error::OutOfGrid {
                coordinate: x,
                start: self.axis.start(),
                end: self.axis.end(),
            });
        }
        let u = (x - self.axis.start()) / self.axis.step();
        let nearest = u.round();
        if (u - nearest).abs() < 1e-12 {
            return Ok(self.values[nearest as usize]);
        }
        let coeffs = dft_coefficients(&self.values);
        let n = self.values.len();
        let half = (n / 2) as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, c) in coeffs.iter().enumerate() {
            let q = p as i64 - half;
            acc += c * Complex64::from_polar(1.0, 2.0 * PI * q as f64 * u / n as f64);
        }
        Ok(acc / n as f64)
    }

    fn check_compatible(&self, other: &SampledFunction) -> Result<()> {
        if !self.axis.same_as(&other.axis) {
            return Err(Error::Incompatible(format!(
                "axes differ: {} vs {}",
                self.axis, other.axis
            )));
        }
        if self.representation != other.representation {
            return Err(Error::Incompatible(format!(
                "representations differ: {} vs {}",
                self.representation.name(),
                other.representation.name()
            )));
        }
        if self.s != other.s || self.lambda != other.lambda {
            return Err(Error::Incompatible(format!(
                "channel tags differ: (s={}, {}) vs (s={}, {})",
                self.s,
                self.lambda.name(),
                other.s,
                other.lambda.name()
            )));
        }
        Ok(())
    }

    /// Writes `coordinate,re,im` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["coordinate", "re", "im"])?;
        for (x, v) in self.axis.points().zip(&self.values) {
            w.write_record([fmt17(x), fmt17(v.re), fmt17(v.im)])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Reads a position-space function from `coordinate,re,im` CSV. The
    /// coordinates must be ascending and uniformly spaced with an even count.
    pub fn read_csv<R: Read>(reader: R, s: Direction, lambda: Polarization, source: &Path) -> Result<Self> {
        let malformed = |reason: String| Error::MalformedSamples {
            path: source.to_path_buf(),
            reason,
        };
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers().map_err(|e| malformed(e.to_string()))?.clone();
        let names: Vec<&str> = headers.iter().map(str::trim).collect();
        if names != ["coordinate", "re", "im"] {
            return Err(malformed(format!(
                "expected header coordinate,re,im, got {}",
                names.join(",")
            )));
        }
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (line, record) in r.records().enumerate() {
            let record = record.map_err(|e| malformed(e.to_string()))?;
            if record.len() != 3 {
                return Err(malformed(format!("row {}: expected 3 fields", line + 2)));
            }
            let parse = |i: usize| -> Result<f64> {
                let field = record[i].trim();
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| malformed(format!("row {}: bad number {field:?}", line + 2)))
            };
            xs.push(parse(0)?);
            values.push(Complex64::new(parse(1)?, parse(2)?));
        }
        if xs.len() < 2 {
            return Err(malformed(format!("need at least 2 samples, got {}", xs.len())));
        }
        let step = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        for (i, w) in xs.windows(2).enumerate() {
            let d = w[1] - w[0];
            if d <= 0.0 || (d - step).abs() > 1e-9 * step {
                return Err(malformed(format!(
                    "coordinates not uniformly ascending at row {}",
                    i + 3
                )));
            }
        }
        let axis = Axis::new(xs[0], step, xs.len()).map_err(|e| malformed(e.to_string()))?;
        SampledFunction::new(axis, values, Representation::PositionChi, s, lambda)
    }

    pub fn load_csv(path: &Path, s: Direction, lambda: Polarization) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_csv(std::io::BufReader::new(file), s, lambda, path)
    }
}

/// Decimal text with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `step * sum conj(f_i) g_i`.
pub fn inner_product(f: &SampledFunction, g: &SampledFunction) -> Result<Complex64> {
    f.check_compatible(g)?;
    let sum: Complex64 = f.values.iter().zip(&g.values).map(|(a, b)| a.conj() * b).sum();
    Ok(sum * f.axis.step())
}

/// `sqrt(step * sum |f_i - g_i|^2)`.
pub fn l2_distance(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    f.check_compatible(g)?;
    let sum: f64 = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok((sum * f.axis.step()).sqrt())
}

/// `l2_distance(f, g) / norm(g)`, or the absolute distance when `g` is zero.
pub fn relative_l2(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    let d = l2_distance(f, g)?;
    let n = g.norm();
    Ok(if n > 0.0 { d / n } else { d })
}

/// Diagnostics attached to every resampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResampleDiagnostics {
    /// Fraction of the input's spectral energy that lands above the target
    /// grid's Nyquist wavenumber after scaling.
    pub leakage: f64,
    /// Fraction of the input's energy that maps outside the target axis.
    pub truncated: f64,
    /// `leakage > LEAKAGE_THRESHOLD`.
    pub band_limit_warning: bool,
}

impl ResampleDiagnostics {
    pub fn clean() -> Self {
        Self {
            leakage: 0.0,
            truncated: 0.0,
            band_limit_warning: false,
        }
    }

    /// Worst case of two diagnostics.
    pub fn merge(self, other: Self) -> Self {
        Self {
            leakage: self.leakage.max(other.leakage),
            truncated: self.truncated.max(other.truncated),
            band_limit_warning: self.band_limit_warning || other.band_limit_warning,
        }
    }
}

/// Output of [`resample`].
#[derive(Debug, Clone)]
pub struct Resampled {
    pub function: SampledFunction,
    pub diagnostics: ResampleDiagnostics,
}

/// Evaluates `g(x) = amplitude_factor * f(scale * x)` at every point of
/// `target`. Points whose preimage `scale * x` falls outside `f`'s grid are
/// zero; `f` is assumed to vanish there.
pub fn resample(
    f: &SampledFunction,
    scale: f64,
    amplitude_factor: f64,
    target: &Axis,
    method: Interpolation,
) -> Result<Resampled> {
    if !(scale.is_finite() && scale != 0.0) {
        return Err(Error::ZeroScale(scale));
    }
    let src = f.axis;
    let n = src.count();
    let coeffs = dft_coefficients(&f.values);

    let leakage = {
        let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            0.0
        } else {
            let band = target.nyquist();
            let dq = 2.0 * PI / src.period();
            let above: f64 = coeffs
                .iter()
                .enumerate()
                .filter(|(p, _)| ((*p as f64 - (n / 2) as f64) * dq * scale).abs() > band * (1.0 + 1e-12))
                .map(|(_, c)| c.norm_sqr())
                .sum();
            // Sums of empty iterators are -0.0.
            above.abs() / total
        }
    };

    let truncated = {
        let total: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            0.0
        } else {
            let (lo, hi) = {
                let a = scale * target.start();
                let b = scale * target.end();
                (a.min(b), a.max(b))
            };
            let outside: f64 = src
                .points()
                .zip(&f.values)
                .filter(|(x, _)| *x < lo - 1e-12 * src.step() || *x > hi + 1e-12 * src.step())
                .map(|(_, v)| v.norm_sqr())
                .sum();
            outside.abs() / total
        }
    };

    let mut values = match method {
        Interpolation::BandLimited => {
            // Preimages form a uniform grid u_j = u0 + j * r in units of the
            // source step.
            let u0 = (scale * target.start() - src.start()) / src.step();
            let r = scale * target.step() / src.step();
            trig_eval_uniform(&coeffs, u0, r, target.count())
        }
        Interpolation::Cubic => target
            .points()
            .map(|x| cubic_eval(&f.values, (scale * x - src.start()) / src.step()))
            .collect(),
    };

    let last = (n - 1) as f64;
    for (x, v) in target.points().zip(values.iter_mut()) {
        let u = (scale * x - src.start()) / src.step();
        if u < -1e-9 || u > last + 1e-9 {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v *= amplitude_factor;
        }
    }

    let mut function = SampledFunction::new(*target, values, f.representation, f.s, f.lambda)?;
    function.origin = f.origin;
    Ok(Resampled {
        function,
        diagnostics: ResampleDiagnostics {
            leakage,
            truncated,
            band_limit_warning: leakage > LEAKAGE_THRESHOLD,
        },
    })
}

/// DFT coefficients reordered by signed frequency: entry `p` holds the
/// coefficient of `exp(2 pi i q j / n)` with `q = p - n/2`.
fn dft_coefficients(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    (0..n).map(|p| buf[(p + half) % n]).collect()
}

/// Evaluates `(1/n) sum_q c_q exp(2 pi i q u_j / n)` at `u_j = u0 + j r`,
/// `j < m`, with a chirp-z transform.
fn trig_eval_uniform(coeffs: &[Complex64], u0: f64, r: f64, m: usize) -> Vec<Complex64> {
    let n = coeffs.len();
    let nf = n as f64;
    let half = (n / 2) as f64;
    let theta = 2.0 * PI * r / nf;

    // sum_p a_p w^{p j} with w = e^{i theta}; the q = p - n/2 offset is a
    // per-output phase.
    let a: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(p, c)| {
            let q = p as f64 - half;
            c * Complex64::from_polar(1.0, 2.0 * PI * q * u0 / nf)
        })
        .collect();

    let len = (n + m - 1).next_power_of_two();
    let chirp = |k: f64| Complex64::from_polar(1.0, 0.5 * theta * k * k);

    let mut x = vec![Complex64::new(0.0, 0.0); len];
    for (p, ap) in a.iter().enumerate() {
        x[p] = ap * chirp(p as f64);
    }
    let mut y = vec![Complex64::new(0.0, 0.0); len];
    for (j, yj) in y.iter_mut().take(m).enumerate() {
        *yj = chirp(j as f64).conj();
    }
    for p in 1..n {
        y[len - p] = chirp(p as f64).conj();
    }

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    fwd.process(&mut x);
    fwd.process(&mut y);
    for (xi, yi) in x.iter_mut().zip(&y) {
        *xi *= yi;
    }
    inv.process(&mut x);

    let norm = 1.0 / (len as f64 * nf);
    (0..m)
        .map(|j| {
            let jf = j as f64;
            x[j] * chirp(jf) * Complex64::from_polar(norm, -theta * half * jf)
        })
        .collect()
}

/// Keys cubic convolution at fractional index `u`, samples beyond the ends
/// taken as zero.
fn cubic_eval(values: &[Complex64], u: f64) -> Complex64 {
    let base = u.floor();
    let t = u - base;
    let i = base as i64;
    let sample = |k: i64| -> Complex64 {
        if k >= 0 && (k as usize) < values.len() {
            values[k as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let (p0, p1, p2, p3) = (sample(i - 1), sample(i), sample(i + 1), sample(i + 2));
    let t2 = t * t;
    let t3 = t2 * t;
    let w0 = -0.5 * t3 + t2 - 0.5 * t;
    let w1 = 1.5 * t3 - 2.5 * t2 + 1.0;
    let w2 = -1.5 * t3 + 2.0 * t2 + 0.5 * t;
    let w3 = 0.5 * t3 - 0.5 * t2;
    p0 * w0 + p1 * w1 + p2 * w2 + p3 * w3
}
