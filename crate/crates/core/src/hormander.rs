//! Refined Sobolev scale `H^{s,φ}` on the torus `Tⁿ` through truncated
//! Fourier series, `‖u‖ = (Σ ⟨k⟩^{2s} φ²(⟨k⟩) |c_k|²)^{1/2}` with
//! `⟨k⟩ = (1 + |k|²)^{1/2}`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compare::Comparison;
use crate::couple::{norm_psi, SpectralCouple, SpectralVector};
use crate::error::{Error, Result};
use crate::param::{interpolation_psi, ParamFn};

/// `(1 + |k|²)^{1/2}`.
pub fn bracket(k: &[i64]) -> f64 {
    let sq: f64 = k.iter().map(|&x| (x as f64) * (x as f64)).sum();
    (1.0 + sq).sqrt()
}

/// `1 + |k|²`.
pub fn bracket_sq(k: &[i64]) -> f64 {
    1.0 + k.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>()
}

/// Band-limited distribution on `Tⁿ`: coefficients `c_k` for `|k_i| <= K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierDistribution {
    n: usize,
    band: u64,
    modes: BTreeMap<Vec<i64>, Complex64>,
    real: bool,
}

impl FourierDistribution {
    pub fn new(n: usize, band: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution(
                "dimension must be at least 1".into(),
            ));
        }
        Ok(FourierDistribution {
            n,
            band,
            modes: BTreeMap::new(),
            real: false,
        })
    }

    pub fn single_mode(k: &[i64], c: Complex64) -> Result<Self> {
        let band = k.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        let mut u = Self::new(k.len(), band)?;
        u.set(k.to_vec(), c)?;
        Ok(u)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn band(&self) -> u64 {
        self.band
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.modes.iter()
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn get(&self, k: &[i64]) -> Complex64 {
        self.modes.get(k).copied().unwrap_or_default()
    }

    fn check_index(&self, k: &[i64]) -> Result<()> {
        if k.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: k.len(),
            });
        }
        if k.iter().any(|x| x.unsigned_abs() > self.band) {
            return Err(Error::InvalidDistribution(format!(
                "mode {k:?} outside band {}",
                self.band
            )));
        }
        Ok(())
    }

    pub fn set(&mut self, k: Vec<i64>, c: Complex64) -> Result<()> {
        self.check_index(&k)?;
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidDistribution(
                "coefficients must be finite".into(),
            ));
        }
        self.modes.insert(k, c);
        Ok(())
    }

    /// Flags the distribution as real after checking `c_{-k} = conj(c_k)`.
    pub fn mark_real(&mut self) -> Result<()> {
        for (k, c) in &self.modes {
            let neg: Vec<i64> = k.iter().map(|x| -x).collect();
            if self.get(&neg) != c.conj() {
                return Err(Error::InvalidDistribution(format!(
                    "conjugate symmetry fails at mode {k:?}"
                )));
            }
        }
        self.real = true;
        Ok(())
    }

    /// Same coefficients in a band of at least `band`.
    pub fn widen(&self, band: u64) -> Self {
        let mut out = self.clone();
        out.band = self.band.max(band);
        out
    }

    /// Sum over the union band, missing modes read as zero.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = self.widen(other.band);
        for (k, c) in &other.modes {
            *out.modes.entry(k.clone()).or_default() += c;
        }
        out.real = self.real && other.real;
        Ok(out)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.modes.values_mut() {
            *c *= a;
        }
        out.real = self.real && a.im == 0.0;
        out
    }

    /// Mode-wise multiplication by `f(k)`.
    pub fn multiply_by(&self, f: impl Fn(&[i64]) -> f64) -> Self {
        let mut out = self.clone();
        for (k, c) in out.modes.iter_mut() {
            *c *= f(k);
        }
        out
    }

    /// `Σ |c_k|²` in mode order.
    pub fn l2_norm(&self) -> f64 {
        self.modes
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Serialize, Deserialize)]
struct ModeEntry {
    k: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct DistributionData {
    n: usize,
    #[serde(rename = "K")]
    band: u64,
    modes: Vec<ModeEntry>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    real: bool,
}

impl Serialize for FourierDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DistributionData {
            n: self.n,
            band: self.band,
            modes: self
                .modes
                .iter()
                .map(|(k, c)| ModeEntry {
                    k: k.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
            real: self.real,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let data = DistributionData::deserialize(d)?;
        let mut u = FourierDistribution::new(data.n, data.band).map_err(D::Error::custom)?;
        for m in data.modes {
            u.set(m.k, Complex64::new(m.re, m.im))
                .map_err(D::Error::custom)?;
        }
        if data.real {
            u.mark_real().map_err(D::Error::custom)?;
        }
        Ok(u)
    }
}

/// Pair `(s, φ)` indexing the refined scale.
#[derive(Debug, Clone)]
pub struct SmoothnessIndex {
    pub s: f64,
    pub phi: ParamFn,
}

impl SmoothnessIndex {
    pub fn new(s: f64, phi: ParamFn) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParamFn("s must be finite".into()));
        }
        Ok(SmoothnessIndex { s, phi })
    }

    pub fn sobolev(s: f64) -> Self {
        SmoothnessIndex {
            s,
            phi: ParamFn::one(),
        }
    }

    /// `⟨k⟩^s φ(⟨k⟩)`.
    pub fn weight(&self, k: &[i64]) -> Result<f64> {
        self.weight_at(bracket(k))
    }

    /// `b^s φ(b)` for a bracket value `b >= 1`.
    pub fn weight_at(&self, b: f64) -> Result<f64> {
        Ok(b.powf(self.s) * self.phi.eval(b)?)
    }
}

pub fn hnorm(u: &FourierDistribution, idx: &SmoothnessIndex) -> Result<f64> {
    let mut sum = 0.0;
    for (k, c) in u.modes() {
        let w = idx.weight(k)?;
        sum += w * w * c.norm_sqr();
    }
    Ok(sum.sqrt())
}

/// Norm of `u` in `[H^{s-ε}, H^{s+δ}]_ψ`, computed on the couple generated
/// by `⟨k⟩^{ε+δ}` with base weights `⟨k⟩^{s-ε}`, against `hnorm(u)`.
pub fn interpolation_identity_check(
    u: &FourierDistribution,
    idx: &SmoothnessIndex,
    eps: f64,
    delta: f64,
) -> Result<Comparison> {
    let psi = interpolation_psi(&idx.phi, eps, delta)?;
    let rhs = hnorm(u, idx)?;
    if u.mode_count() == 0 {
        return Ok(Comparison::new(0.0, rhs));
    }
    let mut lambda = Vec::with_capacity(u.mode_count());
    let mut v = Vec::with_capacity(u.mode_count());
    for (k, c) in u.modes() {
        let b = bracket(k);
        lambda.push(b.powf(eps + delta));
        v.push(c * b.powf(idx.s - eps));
    }
    let couple = SpectralCouple::new(lambda, 1.0)?;
    let lhs = norm_psi(&couple, &psi, &SpectralVector(v))?;
    Ok(Comparison::new(lhs, rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionConstants {
    /// `max ⟨k⟩^s φ(⟨k⟩) / ⟨k⟩^{s+ε}` over the band.
    pub upper: f64,
    pub upper_mode: Vec<i64>,
    /// `max ⟨k⟩^{s-ε} / (⟨k⟩^s φ(⟨k⟩))` over the band.
    pub lower: f64,
    pub lower_mode: Vec<i64>,
}

/// Distinct values of `|k|²` over the band `|k_i| <= K` in `n` dimensions,
/// each with the first mode of the nonnegative orthant (lexicographic
/// order) attaining it.
pub fn band_levels(n: usize, band: u64) -> Vec<(u64, Vec<i64>)> {
    let mut k = vec![0i64; n];
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    loop {
        let sq: u64 = k.iter().map(|&x| (x * x) as u64).sum();
        if seen.insert(sq) {
            out.push((sq, k.clone()));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (k[i] as u64) < band {
                k[i] += 1;
                for x in k.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Constants of `H^{s+ε} ↪ H^{s,φ} ↪ H^{s-ε}` restricted to the band
/// `|k_i| <= K` in `n` dimensions. Weights depend on `|k|` only; the first
/// maximiser in [`band_levels`] order is reported.
pub fn inclusion_constants(
    idx: &SmoothnessIndex,
    eps: f64,
    n: usize,
    band: u64,
) -> Result<InclusionConstants> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveParameter {
            name: "epsilon",
            value: eps,
        });
    }
    if n == 0 {
        return Err(Error::InvalidDistribution(
            "dimension must be at least 1".into(),
        ));
    }
    let mut best = InclusionConstants {
        upper: f64::NEG_INFINITY,
        upper_mode: vec![0; n],
        lower: f64::NEG_INFINITY,
        lower_mode: vec![0; n],
    };
    for (sq, k) in band_levels(n, band) {
        let b = (1.0 + sq as f64).sqrt();
        let phi = idx.phi.eval(b)?;
        let up = phi * b.powf(-eps);
        let low = b.powf(-eps) / phi;
        if up > best.upper {
            best.upper = up;
            best.upper_mode = k.clone();
        }
        if low > best.lower {
            best.lower = low;
            best.lower_mode = k;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn single_mode_norm() {
        let logs = ParamFn::log_multiscale(&[1.0]).unwrap();
        let idx = SmoothnessIndex::new(1.5, logs.clone()).unwrap();
        let u = FourierDistribution::single_mode(&[3, -4], one()).unwrap();
        let b = 26f64.sqrt();
        let want = b.powf(1.5) * logs.eval(b).unwrap();
        assert!((hnorm(&u, &idx).unwrap() - want).abs() <= 1e-14 * want);

        let zero = FourierDistribution::single_mode(&[0], one()).unwrap();
        assert_eq!(hnorm(&zero, &SmoothnessIndex::sobolev(-3.0)).unwrap(), 1.0);
    }

    #[test]
    fn normalized_modes_sum_to_count() {
        let phi = ParamFn::log_multiscale(&[0.5, 1.0]).unwrap();
        let idx = SmoothnessIndex::new(-0.7, phi).unwrap();
        let mut u = FourierDistribution::new(2, 5).unwrap();
        let mut m = 0;
        for a in -5..=5i64 {
            for b in [-2i64, 1, 5] {
                let k = vec![a, b];
                let c = 1.0 / idx.weight(&k).unwrap();
                u.set(k, Complex64::new(c, 0.0)).unwrap();
                m += 1;
            }
        }
        let v = hnorm(&u, &idx).unwrap();
        assert!((v - (m as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn parseval_at_order_zero() {
        let mut u = FourierDistribution::new(1, 8).unwrap();
        for k in -8..=8i64 {
            u.set(
                vec![k],
                Complex64::new(k as f64 * 0.5, 1.0 / (1.0 + k.abs() as f64)),
            )
            .unwrap();
        }
        assert_eq!(
            hnorm(&u, &SmoothnessIndex::sobolev(0.0)).unwrap(),
            u.l2_norm()
        );
    }

    #[test]
    fn interpolation_identity_examples() {
        let u = FourierDistribution::single_mode(&[7], Complex64::new(0.3, -2.0)).unwrap();
        let idx = SmoothnessIndex::sobolev(1.25);
        let cmp = interpolation_identity_check(&u, &idx, 1.0, 1.0).unwrap();
        assert!(cmp.agrees(1e-12));
        let logs =
            SmoothnessIndex::new(-2.0, ParamFn::log_multiscale(&[2.0, -1.0]).unwrap()).unwrap();
        let cmp = interpolation_identity_check(&u, &logs, 0.3, 2.5).unwrap();
        assert!(cmp.agrees(1e-12));
        let empty = FourierDistribution::new(1, 4).unwrap();
        let cmp = interpolation_identity_check(&empty, &logs, 0.3, 2.5).unwrap();
        assert_eq!((cmp.lhs, cmp.rhs), (0.0, 0.0));
        assert!(interpolation_identity_check(&u, &logs, 0.0, 1.0).is_err());
    }

    #[test]
    fn inclusion_constants_trivial_and_brute_force() {
        let c = inclusion_constants(&SmoothnessIndex::sobolev(2.0), 0.5, 2, 16).unwrap();
        assert_eq!((c.upper, c.lower), (1.0, 1.0));
        assert_eq!(c.upper_mode, vec![0, 0]);

        let logs = ParamFn::log_multiscale(&[1.0]).unwrap();
        let idx = SmoothnessIndex::new(0.0, logs.clone()).unwrap();
        let c = inclusion_constants(&idx, 0.5, 1, 256).unwrap();
        let (mut up, mut low) = (0.0f64, 0.0f64);
        for k in 0..=256i64 {
            let b = bracket(&[k]);
            let w = logs.eval(b).unwrap();
            up = up.max(w / b.powf(0.5));
            low = low.max(b.powf(-0.5) / w);
        }
        assert!((c.upper - up).abs() <= 1e-14 * up);
        assert!((c.lower - low).abs() <= 1e-14 * low);
        assert!(c.upper.is_finite() && c.lower.is_finite());
        let b = bracket(&c.upper_mode);
        assert!((logs.eval(b).unwrap() / b.sqrt() - c.upper).abs() <= 1e-14 * up);

        let mut prev = f64::INFINITY;
        for eps in [0.1, 0.2, 0.5, 1.0, 2.0] {
            let c = inclusion_constants(&idx, eps, 1, 256).unwrap();
            assert!(c.upper <= prev);
            prev = c.upper;
        }
    }

    #[test]
    fn union_band_and_json() {
        let a = FourierDistribution::single_mode(&[1, 0], one()).unwrap();
        let b = FourierDistribution::single_mode(&[0, -6], one()).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.band(), 6);
        assert_eq!(s.mode_count(), 2);

        let text = r#"{"n":1,"K":2,"modes":[{"k":[-1],"re":1.0,"im":-2.0},{"k":[1],"re":1.0,"im":2.0}],"real":true}"#;
        let u: FourierDistribution = serde_json::from_str(text).unwrap();
        assert!(u.is_real());
        assert_eq!(serde_json::to_string(&u).unwrap(), text);
        let bad = r#"{"n":1,"K":2,"modes":[{"k":[1],"re":1.0,"im":2.0}],"real":true}"#;
        assert!(serde_json::from_str::<FourierDistribution>(bad).is_err());
        let outside = r#"{"n":1,"K":2,"modes":[{"k":[3],"re":1.0}]}"#;
        assert!(serde_json::from_str::<FourierDistribution>(outside).is_err());
    }
}
