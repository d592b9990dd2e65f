use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::{CMatrix, Error, Result, I};

/// Generator of the complexified Heisenberg Lie algebra.
///
/// Indices are 1-based, matching the operator syntax `Z1`, `Zb1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Z(usize),
    Zbar(usize),
    T,
}

impl Generator {
    /// Weight under the parabolic dilations: 1 for `Z`, `Zbar`; 2 for `T`.
    pub fn weight(self) -> u32 {
        match self {
            Generator::Z(_) | Generator::Zbar(_) => 1,
            Generator::T => 2,
        }
    }

    pub(crate) fn check_index(self, n: usize) -> Result<()> {
        match self {
            Generator::Z(j) | Generator::Zbar(j) if j == 0 || j > n => Err(Error::InvalidArgument(
                format!("generator index {j} out of range 1..={n}"),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Z(j) => write!(f, "Z{j}"),
            Generator::Zbar(j) => write!(f, "Zb{j}"),
            Generator::T => write!(f, "T"),
        }
    }
}

/// Normal-ordered monomial `Z^α · Zbar^γ · T^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    z: Vec<u32>,
    zbar: Vec<u32>,
    t: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { z: vec![0; n], zbar: vec![0; n], t: 0 }
    }

    pub fn new(z: Vec<u32>, zbar: Vec<u32>, t: u32) -> Result<Self> {
        if z.len() != zbar.len() {
            return Err(Error::DimensionMismatch(format!(
                "Z multi-index has length {}, Zbar multi-index has length {}",
                z.len(),
                zbar.len()
            )));
        }
        Ok(Monomial { z, zbar, t })
    }

    pub fn generator(n: usize, g: Generator) -> Result<Self> {
        g.check_index(n)?;
        let mut m = Monomial::one(n);
        match g {
            Generator::Z(j) => m.z[j - 1] = 1,
            Generator::Zbar(j) => m.zbar[j - 1] = 1,
            Generator::T => m.t = 1,
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[u32] {
        &self.z
    }

    pub fn zbar(&self) -> &[u32] {
        &self.zbar
    }

    pub fn t_power(&self) -> u32 {
        self.t
    }

    /// Heisenberg weight `|α| + |γ| + 2p`.
    pub fn weight(&self) -> u32 {
        self.z.iter().sum::<u32>() + self.zbar.iter().sum::<u32>() + 2 * self.t
    }

    /// Net change in Fock degree, `|α| − |γ|`.
    pub fn degree_shift(&self) -> i64 {
        self.z.iter().sum::<u32>() as i64 - self.zbar.iter().sum::<u32>() as i64
    }

    pub fn is_one(&self) -> bool {
        self.t == 0 && self.z.iter().all(|&a| a == 0) && self.zbar.iter().all(|&a| a == 0)
    }

    /// Normal-ordered expansion of `self · other` as `(scalar, monomial)` pairs.
    ///
    /// Only `Zbar^γ · Z^α'` needs reordering. Per index `j`, with `h = −2iT`
    /// central and `Zbar Z = Z Zbar + h`:
    /// `Zbar^c Z^a = Σ_m m! C(c,m) C(a,m) h^m Z^(a−m) Zbar^(c−m)`.
    pub(crate) fn product(&self, other: &Monomial) -> Vec<(Complex64, Monomial)> {
        let n = self.n();
        let limits: Vec<u32> = (0..n).map(|j| self.zbar[j].min(other.z[j])).collect();
        let mut out = Vec::new();
        let mut m = vec![0u32; n];
        loop {
            let mut scalar = 1.0_f64;
            let mut contractions = 0u32;
            for j in 0..n {
                let mj = m[j];
                scalar *= factorial(mj) * binomial(self.zbar[j], mj) * binomial(other.z[j], mj);
                contractions += mj;
            }
            let z: Vec<u32> = (0..n).map(|j| self.z[j] + other.z[j] - m[j]).collect();
            let zbar: Vec<u32> = (0..n).map(|j| self.zbar[j] - m[j] + other.zbar[j]).collect();
            let coeff = Complex64::new(scalar, 0.0) * (-2.0 * I).powu(contractions);
            out.push((coeff, Monomial { z, zbar, t: self.t + other.t + contractions }));

            // odometer over 0 ≤ m ≤ limits
            let mut j = 0;
            loop {
                if j == n {
                    return out;
                }
                if m[j] < limits[j] {
                    m[j] += 1;
                    break;
                }
                m[j] = 0;
                j += 1;
            }
        }
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, x| acc * x as f64)
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Element of `M_r(ℂ) ⊗ U(𝔥_n)`: a noncommutative polynomial in `Z_j`, `Zbar_j`, `T`
/// with constant `r×r` complex matrix coefficients, stored in normal order.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvElement {
    n: usize,
    r: usize,
    terms: BTreeMap<Monomial, CMatrix>,
}

impl EnvElement {
    pub fn zero(n: usize, r: usize) -> Self {
        EnvElement { n, r, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, r: usize) -> Self {
        Self::from_matrix(n, CMatrix::identity(r, r))
    }

    pub fn scalar(n: usize, r: usize, c: Complex64) -> Self {
        Self::from_matrix(n, CMatrix::identity(r, r) * c)
    }

    /// Degree-zero element with the given coefficient matrix.
    pub fn from_matrix(n: usize, coeff: CMatrix) -> Self {
        let r = coeff.nrows();
        let mut e = EnvElement::zero(n, r);
        e.add_term(Monomial::one(n), coeff);
        e
    }

    pub fn generator(n: usize, r: usize, g: Generator) -> Result<Self> {
        let mut e = EnvElement::zero(n, r);
        e.add_term(Monomial::generator(n, g)?, CMatrix::identity(r, r));
        Ok(e)
    }

    /// Builds an element from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        n: usize,
        r: usize,
        terms: impl IntoIterator<Item = (Monomial, CMatrix)>,
    ) -> Result<Self> {
        let mut e = EnvElement::zero(n, r);
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "monomial has n = {}, element has n = {n}",
                    m.n()
                )));
            }
            if c.nrows() != r || c.ncols() != r {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient is {}×{}, expected {r}×{r}",
                    c.nrows(),
                    c.ncols()
                )));
            }
            e.add_term(m, c);
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CMatrix)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&CMatrix> {
        self.terms.get(m)
    }

    /// Maximum weight `|α|+|γ|+2p` over stored monomials; 0 for the zero element.
    pub fn heisenberg_order(&self) -> u32 {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    /// True when every coefficient is a multiple of the identity.
    pub fn has_scalar_coefficients(&self) -> bool {
        self.terms.values().all(|c| {
            let d = c[(0, 0)];
            c.iter().enumerate().all(|(k, z)| {
                let (i, j) = (k % self.r, k / self.r);
                if i == j {
                    *z == d
                } else {
                    *z == Complex64::new(0.0, 0.0)
                }
            })
        })
    }

    fn add_term(&mut self, m: Monomial, c: CMatrix) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !is_zero_matrix(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if is_zero_matrix(o.get()) {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &EnvElement) -> Result<()> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::DimensionMismatch(format!(
                "(n, r) = ({}, {}) vs ({}, {})",
                self.n, self.r, other.n, other.r
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &EnvElement) -> Result<EnvElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &EnvElement) -> Result<EnvElement> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> EnvElement {
        let mut out = EnvElement::zero(self.n, self.r);
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), coeff * c);
        }
        out
    }

    /// Left multiplication of every coefficient by a constant matrix.
    pub fn left_mul_matrix(&self, a: &CMatrix) -> Result<EnvElement> {
        if a.nrows() != self.r || a.ncols() != self.r {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}×{}, element has r = {}",
                a.nrows(),
                a.ncols(),
                self.r
            )));
        }
        let mut out = EnvElement::zero(self.n, self.r);
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), a * coeff);
        }
        Ok(out)
    }

    /// Normal-ordered product `self · other`; coefficient matrices multiply in order.
    pub fn multiply(&self, other: &EnvElement) -> Result<EnvElement> {
        self.check_compatible(other)?;
        Ok(self.product_with(other, false))
    }

    /// Product of words `self · other` whose coefficients are multiplied in the
    /// opposite order (`coeff(other) · coeff(self)`).
    ///
    /// `op` keeps coefficients in place, so on matrix-valued elements it satisfies
    /// `op(P·Q) = op(Q) ⋆ op(P)` with this product rather than the ordinary one.
    pub fn multiply_coefficients_reversed(&self, other: &EnvElement) -> Result<EnvElement> {
        self.check_compatible(other)?;
        Ok(self.product_with(other, true))
    }

    fn product_with(&self, other: &EnvElement, reversed: bool) -> EnvElement {
        let mut out = EnvElement::zero(self.n, self.r);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let coeff = if reversed { cb * ca } else { ca * cb };
                for (s, m) in ma.product(mb) {
                    out.add_term(m, &coeff * s);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> EnvElement {
        let mut out = EnvElement::one(self.n, self.r);
        for _ in 0..k {
            out = out.product_with(self, false);
        }
        out
    }

    /// The `op` anti-automorphism: `Z ↦ Z`, `Zbar ↦ Zbar`, `T ↦ −T`, words reversed.
    /// Coefficient matrices stay attached to their word unchanged.
    pub fn op_involution(&self) -> EnvElement {
        let mut out = EnvElement::zero(self.n, self.r);
        for (m, c) in &self.terms {
            // reversed word (−T)^p Zbar^γ Z^α, reordered
            let sign = if m.t % 2 == 0 { 1.0 } else { -1.0 };
            let zbar_part = Monomial { z: vec![0; self.n], zbar: m.zbar.clone(), t: m.t };
            let z_part = Monomial { z: m.z.clone(), zbar: vec![0; self.n], t: 0 };
            for (s, mono) in zbar_part.product(&z_part) {
                out.add_term(mono, c * (s * sign));
            }
        }
        out
    }

    /// Formal adjoint: antilinear, `Z_j ↔ Zbar_j`, `T ↦ −T`, coefficients
    /// conjugate-transposed, words reversed.
    pub fn formal_adjoint(&self) -> EnvElement {
        let mut out = EnvElement::zero(self.n, self.r);
        for (m, c) in &self.terms {
            // (Z^α Zbar^γ T^p)* = (−T)^p Z^γ Zbar^α, already normal ordered
            let sign = if m.t % 2 == 0 { 1.0 } else { -1.0 };
            let mono = Monomial { z: m.zbar.clone(), zbar: m.z.clone(), t: m.t };
            out.add_term(mono, c.adjoint() * Complex64::new(sign, 0.0));
        }
        out
    }

    /// Parabolic dilation: a monomial of weight `w` is scaled by `s^w`.
    pub fn dilate(&self, s: f64) -> Result<EnvElement> {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {s}")));
        }
        let mut out = EnvElement::zero(self.n, self.r);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * Complex64::new(s.powi(m.weight() as i32), 0.0));
        }
        Ok(out)
    }

    /// Homogeneous part of weight exactly `d`. Fails if any term has weight above `d`.
    pub fn principal_part(&self, d: u32) -> Result<EnvElement> {
        let mut out = EnvElement::zero(self.n, self.r);
        for (m, c) in &self.terms {
            let w = m.weight();
            if w > d {
                return Err(Error::OrderViolation { weight: w, declared: d });
            }
            if w == d {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Largest coefficient-entry difference over the union of monomials.
    pub fn max_abs_diff(&self, other: &EnvElement) -> f64 {
        let mut worst = 0.0_f64;
        for (m, c) in &self.terms {
            let d = match other.terms.get(m) {
                Some(o) => crate::max_abs(&(c - o)),
                None => crate::max_abs(c),
            };
            worst = worst.max(d);
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(crate::max_abs(c));
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &EnvElement, tol: f64) -> bool {
        self.n == other.n && self.r == other.r && self.max_abs_diff(other) <= tol
    }
}

fn is_zero_matrix(c: &CMatrix) -> bool {
    c.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

pub(crate) fn format_complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => format!("{}", z.re),
        (true, false) if z.im == 1.0 => "i".to_string(),
        (true, false) if z.im == -1.0 => "-i".to_string(),
        (true, false) => format!("{}*i", z.im),
        _ => {
            if z.im < 0.0 {
                format!("({} - {}*i)", z.re, -z.im)
            } else {
                format!("({} + {}*i)", z.re, z.im)
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        for (j, &a) in self.z.iter().enumerate() {
            for _ in 0..a {
                factors.push(format!("Z{}", j + 1));
            }
        }
        for (j, &a) in self.zbar.iter().enumerate() {
            for _ in 0..a {
                factors.push(format!("Zb{}", j + 1));
            }
        }
        for _ in 0..self.t {
            factors.push("T".to_string());
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

/// Normal-ordered printing. Scalar coefficients print as numbers, matrix
/// coefficients as bracketed literals.
impl fmt::Display for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let scalar = self.has_scalar_coefficients();
        // highest weight first, then by monomial order
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|a, b| b.0.weight().cmp(&a.0.weight()).then_with(|| b.0.cmp(a.0)));
        let parts: Vec<String> = entries
            .into_iter()
            .map(|(m, c)| {
                let coeff = if scalar {
                    format_complex(c[(0, 0)])
                } else {
                    format_matrix(c)
                };
                match (m.is_one(), coeff.as_str()) {
                    (true, _) => coeff,
                    (false, "1") => m.to_string(),
                    (false, "-1") => format!("-{m}"),
                    _ => format!("{coeff}*{m}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

pub(crate) fn format_matrix(c: &CMatrix) -> String {
    let rows: Vec<String> = (0..c.nrows())
        .map(|i| {
            let row: Vec<String> = (0..c.ncols()).map(|j| format_complex(c[(i, j)])).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gen(n: usize, g: Generator) -> EnvElement {
        EnvElement::generator(n, 1, g).unwrap()
    }

    /// Σ Z_j Zbar_j − i(n − β) T
    fn twisted(n: usize, beta: Complex64) -> EnvElement {
        let mut p = EnvElement::zero(n, 1);
        for j in 1..=n {
            p = p.add(&gen(n, Generator::Z(j)).multiply(&gen(n, Generator::Zbar(j))).unwrap()).unwrap();
        }
        let t = gen(n, Generator::T).scale(-I * (c(n as f64, 0.0) - beta));
        p.add(&t).unwrap()
    }

    #[test]
    fn z_zbar_is_already_normal() {
        let p = gen(1, Generator::Z(1)).multiply(&gen(1, Generator::Zbar(1))).unwrap();
        assert_eq!(p.len(), 1);
        let m = Monomial::new(vec![1], vec![1], 0).unwrap();
        assert_eq!(p.coefficient(&m).unwrap()[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn zbar_z_reorders_with_bracket() {
        let p = gen(1, Generator::Zbar(1)).multiply(&gen(1, Generator::Z(1))).unwrap();
        let zz = Monomial::new(vec![1], vec![1], 0).unwrap();
        let t = Monomial::new(vec![0], vec![0], 1).unwrap();
        assert_eq!(p.coefficient(&zz).unwrap()[(0, 0)], c(1.0, 0.0));
        assert_eq!(p.coefficient(&t).unwrap()[(0, 0)], c(0.0, -2.0));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn different_indices_commute() {
        let a = gen(2, Generator::Zbar(1)).multiply(&gen(2, Generator::Z(2))).unwrap();
        let b = gen(2, Generator::Z(2)).multiply(&gen(2, Generator::Zbar(1))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unit_law() {
        let p = twisted(2, c(0.3, 0.0));
        assert_eq!(p.multiply(&EnvElement::one(2, 1)).unwrap(), p);
        assert_eq!(EnvElement::one(2, 1).multiply(&p).unwrap(), p);
    }

    #[test]
    fn higher_power_reordering() {
        // Zbar^2 Z^2 = Z^2 Zbar^2 + 4h Z Zbar + 2h^2 with h = −2iT
        let zb2 = gen(1, Generator::Zbar(1)).pow(2);
        let z2 = gen(1, Generator::Z(1)).pow(2);
        let p = zb2.multiply(&z2).unwrap();
        let get = |z, zb, t| p.coefficient(&Monomial::new(vec![z], vec![zb], t).unwrap()).unwrap()[(0, 0)];
        assert_eq!(get(2, 2, 0), c(1.0, 0.0));
        assert_eq!(get(1, 1, 1), c(0.0, -8.0));
        assert_eq!(get(0, 0, 2), c(-8.0, 0.0));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn dimension_mismatch() {
        let a = EnvElement::one(1, 1);
        let b = EnvElement::one(2, 1);
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch(_))));
        let c2 = EnvElement::one(1, 2);
        assert!(matches!(a.add(&c2), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn op_examples() {
        let t = gen(1, Generator::T);
        assert_eq!(t.op_involution(), t.scale(c(-1.0, 0.0)));

        let zzb = gen(1, Generator::Z(1)).multiply(&gen(1, Generator::Zbar(1))).unwrap();
        let expected = zzb.add(&t.scale(c(0.0, -2.0))).unwrap();
        assert_eq!(zzb.op_involution(), expected);

        for n in 1..=3 {
            let beta = c(0.7, -0.2);
            let got = twisted(n, beta).op_involution();
            let want = twisted(n, -beta);
            assert!(got.approx_eq(&want, 1e-14), "n = {n}: {got} vs {want}");
        }
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(gen(1, Generator::Z(1)).formal_adjoint(), gen(1, Generator::Zbar(1)));
        let it = gen(1, Generator::T).scale(I);
        assert_eq!(it.formal_adjoint(), it);
        for n in 1..=3 {
            let p = twisted(n, c(0.45, 0.0));
            assert!(p.formal_adjoint().approx_eq(&p, 1e-14));
        }
        // complex β is not self-adjoint
        let p = twisted(1, c(0.45, 0.2));
        assert!(!p.formal_adjoint().approx_eq(&p, 1e-3));
    }

    #[test]
    fn matrix_adjoint_conjugate_transposes() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0), c(4.0, 0.0)]);
        let p = EnvElement::generator(1, 2, Generator::Z(1)).unwrap().left_mul_matrix(&a).unwrap();
        let adj = p.formal_adjoint();
        let m = Monomial::new(vec![0], vec![1], 0).unwrap();
        assert_eq!(adj.coefficient(&m).unwrap(), &a.adjoint());
    }

    #[test]
    fn dilation_examples() {
        let s = 1.7;
        let z = gen(1, Generator::Z(1));
        assert!(z.dilate(s).unwrap().approx_eq(&z.scale(c(s, 0.0)), 1e-15));
        let t = gen(1, Generator::T);
        assert!(t.dilate(s).unwrap().approx_eq(&t.scale(c(s * s, 0.0)), 1e-14));
        let p = twisted(1, c(0.0, 0.0));
        assert!(p.dilate(s).unwrap().approx_eq(&p.scale(c(s * s, 0.0)), 1e-14));
        assert!(p.dilate(0.0).is_err());
        assert!(p.dilate(-1.0).is_err());
    }

    #[test]
    fn principal_part_examples() {
        let base = twisted(2, c(0.3, 0.0));
        let with_tail = base.add(&gen(2, Generator::Z(1)).scale(c(0.0, 5.0))).unwrap();
        assert_eq!(with_tail.principal_part(2).unwrap(), base);
        let t = gen(1, Generator::T);
        assert_eq!(t.principal_part(2).unwrap(), t);
        assert!(gen(1, Generator::Z(1)).principal_part(2).unwrap().is_zero());
        assert!(matches!(
            t.principal_part(1),
            Err(Error::OrderViolation { weight: 2, declared: 1 })
        ));
    }

    #[test]
    fn generator_index_checked() {
        assert!(EnvElement::generator(2, 1, Generator::Z(3)).is_err());
        assert!(EnvElement::generator(2, 1, Generator::Zbar(0)).is_err());
    }

    #[test]
    fn display_is_normal_ordered() {
        let p = gen(1, Generator::Zbar(1)).multiply(&gen(1, Generator::Z(1))).unwrap();
        assert_eq!(p.to_string(), "Z1*Zb1 - 2*i*T");
        assert_eq!(EnvElement::zero(1, 1).to_string(), "0");
    }
}
