//! The lattice-ordered group `G = ⊕ G_i` generated by `S = ⊕ S_i`.
//!
//! Each factor `S_i ⊂ ℝ₊` is either cyclic (one positive rational generator,
//! so `G_i` is a scaled copy of `ℤ`) or real: `m_i` positive generators that
//! the user declares rationally independent. A real factor is modelled as the
//! free abelian group `ℤ^{m_i}` ordered by the real value `Σ c_j g_j`.
//!
//! Cone membership is decided by the sign of that value, not by monoid
//! membership, so `√2 − 1` is in the cone even though its coefficient vector
//! `(−1, 1)` is not a nonnegative combination. Signs of real-factor values are
//! certified with exact rational interval arithmetic: a decimal generator
//! `x` stands for the interval `[x − ε, x + ε]` with `ε = 2^-bits`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default half-width of decimal generator intervals, as a power of two.
pub const DEFAULT_PRECISION_BITS: u32 = 60;

/// Default cap on the number of grid elements.
pub const DEFAULT_GRID_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Cyclic,
    Real,
}

/// One positive generator of a factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    text: String,
    value: BigRational,
    /// `false` for decimal strings, which are approximations of a real number.
    exact: bool,
    approx: f64,
}

impl Generator {
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let (value, exact) = parse_number(trimmed)?;
        if !value.is_positive() {
            return Err(Error::InvalidFactor(format!(
                "generator {trimmed:?} is not strictly positive"
            )));
        }
        let approx = value.to_f64().unwrap_or(f64::NAN);
        Ok(Generator {
            text: trimmed.to_string(),
            value,
            exact,
            approx,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }
}

fn parse_number(s: &str) -> Result<(BigRational, bool)> {
    let bad = || Error::Parse(format!("not a rational or decimal number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok((BigRational::new(p, q), true));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|ch| ch.is_ascii_digit())
            || !frac.chars().all(|ch| ch.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok((BigRational::new(num, den), false));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok((BigRational::from_integer(n), true))
}

/// Declaration of one direct summand `S_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSpec {
    kind: FactorKind,
    generators: Vec<Generator>,
    label: String,
    /// Declared, never verified.
    declared_independent: bool,
}

impl FactorSpec {
    pub fn cyclic(label: impl Into<String>, generator: &str) -> Result<Self> {
        Ok(FactorSpec {
            kind: FactorKind::Cyclic,
            generators: vec![Generator::parse(generator)?],
            label: label.into(),
            declared_independent: true,
        })
    }

    pub fn real(label: impl Into<String>, generators: &[&str]) -> Result<Self> {
        let label = label.into();
        if generators.is_empty() {
            return Err(Error::InvalidFactor(format!(
                "real factor {label:?} needs at least one generator"
            )));
        }
        let generators = generators
            .iter()
            .map(|g| Generator::parse(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(FactorSpec {
            kind: FactorKind::Real,
            generators,
            label,
            declared_independent: true,
        })
    }

    pub fn new(kind: FactorKind, label: impl Into<String>, generators: &[&str]) -> Result<Self> {
        match kind {
            FactorKind::Cyclic => {
                if generators.len() != 1 {
                    return Err(Error::InvalidFactor(format!(
                        "cyclic factor needs exactly one generator, got {}",
                        generators.len()
                    )));
                }
                Self::cyclic(label, generators[0])
            }
            FactorKind::Real => Self::real(label, generators),
        }
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn declared_independent(&self) -> bool {
        self.declared_independent
    }
}

/// An element of `G`: one integer coefficient vector per factor.
///
/// The derived ordering is lexicographic on coefficients; it is only used for
/// deterministic tie-breaking, never as the group order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coeffs: Vec<Vec<i64>>,
}

impl GroupElement {
    pub fn from_coeffs(coeffs: Vec<Vec<i64>>) -> Self {
        GroupElement { coeffs }
    }

    pub fn zero(shape: &[usize]) -> Self {
        GroupElement {
            coeffs: shape.iter().map(|&m| vec![0; m]).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Vec<i64>] {
        &self.coeffs
    }

    pub fn factor(&self, i: usize) -> &[i64] {
        &self.coeffs[i]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.coeffs.iter().map(Vec::len).collect()
    }

    pub fn flat(&self) -> Vec<i64> {
        self.coeffs.iter().flatten().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|&c| c == 0)
    }

    pub fn factor_is_zero(&self, i: usize) -> bool {
        self.coeffs[i].iter().all(|&c| c == 0)
    }

    /// Nonnegative coefficients everywhere, i.e. a member of the monoid
    /// generated by the declared generators.
    pub fn in_monoid(&self) -> bool {
        self.coeffs.iter().flatten().all(|&c| c >= 0)
    }

    /// Indices of factors with a nonzero component.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&i| !self.factor_is_zero(i))
            .collect()
    }

    fn zip(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        debug_assert_eq!(self.shape(), other.shape());
        GroupElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        GroupElement {
            coeffs: self
                .coeffs
                .iter()
                .map(|v| v.iter().map(|c| -c).collect())
                .collect(),
        }
    }

    /// Replaces factor `i` by `src`'s factor `i`.
    fn with_factor(mut self, i: usize, src: &[i64]) -> Self {
        self.coeffs[i] = src.to_vec();
        self
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, c) in v.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
        }
        write!(f, ")")
    }
}

/// Evaluated value of one factor component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorValue {
    pub value: f64,
    /// Half-width of the certified interval around the exact midpoint.
    pub error_bound: f64,
    #[serde(serialize_with = "serialize_ordering")]
    pub sign: Ordering,
}

fn serialize_ordering<S: serde::Serializer>(o: &Ordering, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_i8(*o as i8)
}

/// Result of [`Lattice::parse_element`].
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub element: GroupElement,
    pub values: Vec<FactorValue>,
    pub in_cone: bool,
}

/// `g = g₊ − g₋` with `g₊ ∧ g₋ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parts {
    pub plus: GroupElement,
    pub minus: GroupElement,
}

/// The group `G` together with its factor declarations.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    factors: Vec<FactorSpec>,
    precision_bits: u32,
    /// Interval half-width per generator (zero for exact generators).
    radii: Vec<Vec<BigRational>>,
    radii_f64: Vec<Vec<f64>>,
}

impl Lattice {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        Self::with_precision(factors, DEFAULT_PRECISION_BITS)
    }

    pub fn with_precision(factors: Vec<FactorSpec>, precision_bits: u32) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidFactor("at least one factor is required".into()));
        }
        let eps = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(2u32), precision_bits as usize));
        let eps_f64 = eps.to_f64().unwrap_or(0.0);
        let mut radii = Vec::with_capacity(factors.len());
        let mut radii_f64 = Vec::with_capacity(factors.len());
        for f in &factors {
            if f.kind == FactorKind::Cyclic && f.generators.len() != 1 {
                return Err(Error::InvalidFactor(format!(
                    "cyclic factor {:?} must have exactly one generator",
                    f.label
                )));
            }
            let r: Vec<BigRational> = f
                .generators
                .iter()
                .map(|g| if g.exact { BigRational::zero() } else { eps.clone() })
                .collect();
            radii_f64.push(r.iter().map(|x| x.to_f64().unwrap_or(eps_f64)).collect());
            radii.push(r);
        }
        Ok(Lattice {
            factors,
            precision_bits,
            radii,
            radii_f64,
        })
    }

    /// `ℤ₊^k` with unit generators.
    pub fn integer_grid(k: usize) -> Self {
        let factors = (0..k)
            .map(|i| FactorSpec::cyclic(format!("z{i}"), "1").expect("unit generator"))
            .collect();
        Self::new(factors).expect("nonempty")
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn shape(&self) -> Vec<usize> {
        self.factors.iter().map(FactorSpec::rank).collect()
    }

    pub fn total_generators(&self) -> usize {
        self.factors.iter().map(FactorSpec::rank).sum()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::zero(&self.shape())
    }

    /// Builds an element after checking the coefficient shape.
    pub fn element(&self, coeffs: Vec<Vec<i64>>) -> Result<GroupElement> {
        let shape: Vec<usize> = coeffs.iter().map(Vec::len).collect();
        if shape != self.shape() {
            return Err(Error::ShapeMismatch(format!(
                "coefficient shape {shape:?} does not match factor shape {:?}",
                self.shape()
            )));
        }
        Ok(GroupElement { coeffs })
    }

    /// Builds an element from a flat coefficient list (factors concatenated).
    pub fn element_from_flat(&self, flat: &[i64]) -> Result<GroupElement> {
        if flat.len() != self.total_generators() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} coefficients, got {}",
                self.total_generators(),
                flat.len()
            )));
        }
        let mut it = flat.iter().copied();
        let coeffs = self
            .shape()
            .iter()
            .map(|&m| it.by_ref().take(m).collect())
            .collect();
        Ok(GroupElement { coeffs })
    }

    /// The `j`-th generator of factor `i` as a group element.
    pub fn generator(&self, i: usize, j: usize) -> GroupElement {
        let mut g = self.zero();
        g.coeffs[i][j] = 1;
        g
    }

    fn check_shape(&self, g: &GroupElement) -> Result<()> {
        if g.shape() != self.shape() {
            return Err(Error::ShapeMismatch(format!(
                "element shape {:?} does not match factor shape {:?}",
                g.shape(),
                self.shape()
            )));
        }
        Ok(())
    }

    /// Exact midpoint `Σ_j c_j g_j` of factor `i`.
    pub fn exact_value(&self, g: &GroupElement, i: usize) -> BigRational {
        g.coeffs[i]
            .iter()
            .zip(&self.factors[i].generators)
            .fold(BigRational::zero(), |acc, (&c, gen)| {
                acc + gen.value.clone() * BigRational::from_integer(BigInt::from(c))
            })
    }

    fn radius(&self, g: &GroupElement, i: usize) -> BigRational {
        g.coeffs[i]
            .iter()
            .zip(&self.radii[i])
            .fold(BigRational::zero(), |acc, (&c, r)| {
                acc + r.clone() * BigRational::from_integer(BigInt::from(c.abs()))
            })
    }

    pub fn approx_value(&self, g: &GroupElement, i: usize) -> f64 {
        g.coeffs[i]
            .iter()
            .zip(&self.factors[i].generators)
            .map(|(&c, gen)| c as f64 * gen.approx)
            .sum()
    }

    fn error_bound(&self, g: &GroupElement, i: usize) -> f64 {
        g.coeffs[i]
            .iter()
            .zip(&self.radii_f64[i])
            .map(|(&c, r)| c.unsigned_abs() as f64 * r)
            .sum()
    }

    /// Certified sign of factor `i` of `g`.
    pub fn factor_sign(&self, g: &GroupElement, i: usize) -> Result<Ordering> {
        let coeffs = &g.coeffs[i];
        if coeffs.iter().all(|&c| c == 0) {
            return Ok(Ordering::Equal);
        }
        let factor = &self.factors[i];
        if factor.kind == FactorKind::Cyclic {
            return Ok(coeffs[0].cmp(&0));
        }
        // Floating fast path: accept the sign when the value clears a generous
        // bound on rounding plus interval radius.
        let approx = self.approx_value(g, i);
        let slack: f64 = coeffs
            .iter()
            .zip(&factor.generators)
            .zip(&self.radii_f64[i])
            .map(|((&c, gen), r)| c.unsigned_abs() as f64 * (gen.approx.abs() * 1e-12 + r))
            .sum();
        if approx > slack {
            return Ok(Ordering::Greater);
        }
        if approx < -slack {
            return Ok(Ordering::Less);
        }
        let center = self.exact_value(g, i);
        let radius = self.radius(g, i);
        if center > radius {
            Ok(Ordering::Greater)
        } else if -center.clone() > radius {
            Ok(Ordering::Less)
        } else {
            Err(Error::IndeterminateSign(format!(
                "factor {:?} of {g}: |{}| ≤ {:e}",
                factor.label,
                center.to_f64().unwrap_or(f64::NAN),
                radius.to_f64().unwrap_or(f64::NAN)
            )))
        }
    }

    /// Compares factor `i` of `g` and `h` in the total order of `G_i`.
    pub fn compare_factor(&self, g: &GroupElement, h: &GroupElement, i: usize) -> Result<Ordering> {
        if g.coeffs[i] == h.coeffs[i] {
            return Ok(Ordering::Equal);
        }
        let diff = g.sub(h);
        self.factor_sign(&diff, i)
    }

    pub fn parse_element(&self, coeffs: Vec<Vec<i64>>) -> Result<Evaluated> {
        let element = self.element(coeffs)?;
        let values = (0..self.num_factors())
            .map(|i| {
                Ok(FactorValue {
                    value: self.approx_value(&element, i),
                    error_bound: self.error_bound(&element, i),
                    sign: self.factor_sign(&element, i)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let in_cone = values.iter().all(|v| v.sign != Ordering::Less);
        Ok(Evaluated {
            element,
            values,
            in_cone,
        })
    }

    /// Cone membership: every factor value is `≥ 0`.
    pub fn in_cone(&self, g: &GroupElement) -> Result<bool> {
        self.check_shape(g)?;
        for i in 0..self.num_factors() {
            if self.factor_sign(g, i)? == Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Product order: `g ≤ h` iff every factor of `g` is at most that of `h`.
    pub fn leq(&self, g: &GroupElement, h: &GroupElement) -> Result<bool> {
        self.in_cone(&h.sub(g))
    }

    fn select(&self, g: &GroupElement, h: &GroupElement, pick_larger: bool) -> Result<GroupElement> {
        self.check_shape(g)?;
        self.check_shape(h)?;
        let mut out = g.clone();
        for i in 0..self.num_factors() {
            let ord = self.compare_factor(g, h, i)?;
            let take_h = match ord {
                Ordering::Less => pick_larger,
                Ordering::Greater => !pick_larger,
                Ordering::Equal => false,
            };
            if take_h {
                out = out.with_factor(i, &h.coeffs[i]);
            }
        }
        Ok(out)
    }

    pub fn meet(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.select(g, h, false)
    }

    pub fn join(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.select(g, h, true)
    }

    /// `g₊ = g ∨ 0`, `g₋ = (−g) ∨ 0`.
    pub fn decompose(&self, g: &GroupElement) -> Result<Parts> {
        self.check_shape(g)?;
        let zero = self.zero();
        let plus = self.join(g, &zero)?;
        let minus = self.join(&g.neg(), &zero)?;
        debug_assert_eq!(plus.sub(&minus), *g);
        Ok(Parts { plus, minus })
    }

    /// All monoid elements with every coefficient in `0..=depth`, sorted by
    /// exact value vector and then by coefficients.
    pub fn enumerate_grid(&self, depth: u32, cap: usize) -> Result<GridSet> {
        let m = self.total_generators();
        let size = (depth as usize + 1)
            .checked_pow(m as u32)
            .unwrap_or(usize::MAX);
        if size > cap {
            return Err(Error::CapExceeded {
                what: format!("grid of depth {depth} over {m} generators"),
                size,
                cap,
            });
        }
        let mut set = BTreeSet::new();
        let mut flat = vec![0i64; m];
        loop {
            set.insert(self.element_from_flat(&flat)?);
            let mut pos = 0;
            loop {
                if pos == m {
                    return Ok(GridSet::from_elements(self, set.into_iter().collect(), depth));
                }
                if flat[pos] < depth as i64 {
                    flat[pos] += 1;
                    break;
                }
                flat[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Sort key used for deterministic ordering of element lists.
    pub fn sort_key(&self, g: &GroupElement) -> (Vec<BigRational>, GroupElement) {
        (
            (0..self.num_factors()).map(|i| self.exact_value(g, i)).collect(),
            g.clone(),
        )
    }

    /// The unique factor `g` lives in, if it is nonzero on exactly one.
    pub fn single_factor(&self, g: &GroupElement) -> Option<usize> {
        match g.support().as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }
}

/// A finite, deterministically ordered set of monoid elements containing 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSet {
    elements: Vec<GroupElement>,
    depth: u32,
}

impl GridSet {
    fn from_elements(lattice: &Lattice, mut elements: Vec<GroupElement>, depth: u32) -> Self {
        elements.sort_by_cached_key(|g| lattice.sort_key(g));
        GridSet { elements, depth }
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<GroupElement> {
        self.elements
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2_factor() -> Lattice {
        Lattice::new(vec![FactorSpec::real("r", &["1", "1.41421356237309504880"]).unwrap()]).unwrap()
    }

    #[test]
    fn cyclic_value() {
        let l = Lattice::integer_grid(1);
        let e = l.parse_element(vec![vec![3]]).unwrap();
        assert_eq!(e.values[0].value, 3.0);
        assert!(e.in_cone);
    }

    #[test]
    fn zero_is_identity_in_cone() {
        let l = sqrt2_factor();
        let e = l.parse_element(vec![vec![0, 0]]).unwrap();
        assert!(e.element.is_zero());
        assert!(e.in_cone);
    }

    #[test]
    fn real_factor_sign() {
        let l = sqrt2_factor();
        let e = l.parse_element(vec![vec![-1, 1]]).unwrap();
        assert!((e.values[0].value - 0.41421356237309504880).abs() < 1e-12);
        assert!(e.values[0].error_bound > 0.0 && e.values[0].error_bound < 1e-17);
        assert!(e.in_cone);
        let e = l.parse_element(vec![vec![1, -1]]).unwrap();
        assert!(!e.in_cone);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let l = Lattice::integer_grid(2);
        assert!(matches!(l.parse_element(vec![vec![1]]), Err(Error::ShapeMismatch(_))));
        assert!(matches!(l.parse_element(vec![vec![1, 2], vec![0]]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn dependent_generators_are_indeterminate() {
        let l = Lattice::new(vec![FactorSpec::real("r", &["1", "2"]).unwrap()]).unwrap();
        let g = l.element(vec![vec![2, -1]]).unwrap();
        assert!(matches!(l.factor_sign(&g, 0), Err(Error::IndeterminateSign(_))));
    }

    #[test]
    fn close_decimal_is_indeterminate() {
        // Two decimal generators closer than the interval width.
        let l = Lattice::with_precision(
            vec![FactorSpec::real("r", &["1.0000000000000000000001", "1.0"]).unwrap()],
            60,
        )
        .unwrap();
        let g = l.element(vec![vec![1, -1]]).unwrap();
        assert!(matches!(l.factor_sign(&g, 0), Err(Error::IndeterminateSign(_))));
    }

    #[test]
    fn meet_and_join_in_z2() {
        let l = Lattice::integer_grid(2);
        let g = l.element(vec![vec![1], vec![3]]).unwrap();
        let h = l.element(vec![vec![2], vec![1]]).unwrap();
        assert_eq!(l.meet(&g, &h).unwrap(), l.element(vec![vec![1], vec![1]]).unwrap());
        assert_eq!(l.join(&g, &h).unwrap(), l.element(vec![vec![2], vec![3]]).unwrap());
    }

    #[test]
    fn meet_with_zero_in_cone() {
        let l = Lattice::integer_grid(3);
        let g = l.element(vec![vec![2], vec![0], vec![5]]).unwrap();
        assert_eq!(l.meet(&g, &l.zero()).unwrap(), l.zero());
    }

    #[test]
    fn real_meet_selects_smaller_value() {
        let l = sqrt2_factor();
        let g = l.element(vec![vec![-1, 1]]).unwrap();
        let h = l.element(vec![vec![1, 0]]).unwrap();
        assert_eq!(l.meet(&g, &h).unwrap(), g);
        assert_eq!(l.join(&g, &h).unwrap(), h);
    }

    #[test]
    fn decompose_examples() {
        let l = Lattice::integer_grid(2);
        let g = l.element(vec![vec![1], vec![-2]]).unwrap();
        let p = l.decompose(&g).unwrap();
        assert_eq!(p.plus, l.element(vec![vec![1], vec![0]]).unwrap());
        assert_eq!(p.minus, l.element(vec![vec![0], vec![2]]).unwrap());

        let s = l.element(vec![vec![4], vec![1]]).unwrap();
        let p = l.decompose(&s).unwrap();
        assert_eq!(p.plus, s);
        assert_eq!(p.minus, l.zero());

        let r = sqrt2_factor();
        let g = r.element(vec![vec![1, -1]]).unwrap();
        let p = r.decompose(&g).unwrap();
        assert_eq!(p.plus, r.zero());
        assert_eq!(p.minus, r.element(vec![vec![-1, 1]]).unwrap());
    }

    #[test]
    fn grid_examples() {
        let l = Lattice::integer_grid(1);
        let grid = l.enumerate_grid(3, DEFAULT_GRID_CAP).unwrap();
        let flat: Vec<i64> = grid.elements().iter().map(|g| g.flat()[0]).collect();
        assert_eq!(flat, vec![0, 1, 2, 3]);

        let l = Lattice::integer_grid(2);
        let grid = l.enumerate_grid(1, DEFAULT_GRID_CAP).unwrap();
        let flat: Vec<Vec<i64>> = grid.elements().iter().map(GroupElement::flat).collect();
        assert_eq!(flat, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);

        let r = sqrt2_factor();
        let grid = r.enumerate_grid(1, DEFAULT_GRID_CAP).unwrap();
        let values: Vec<f64> = grid.elements().iter().map(|g| r.approx_value(g, 0)).collect();
        assert_eq!(grid.len(), 4);
        let expected = [0.0, 1.0, std::f64::consts::SQRT_2, 1.0 + std::f64::consts::SQRT_2];
        for (v, e) in values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_cap() {
        let l = Lattice::integer_grid(3);
        assert!(matches!(l.enumerate_grid(9, 100), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn generator_parsing() {
        assert!(Generator::parse("3/2").unwrap().is_exact());
        assert!(!Generator::parse("1.5").unwrap().is_exact());
        assert!(Generator::parse("0").is_err());
        assert!(Generator::parse("-1/2").is_err());
        assert!(Generator::parse("abc").is_err());
        assert!(Generator::parse("1/0").is_err());
        assert!(FactorSpec::new(FactorKind::Cyclic, "x", &["1", "2"]).is_err());
        assert!(FactorSpec::real("x", &[]).is_err());
    }
}
