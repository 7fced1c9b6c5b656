//! `M_Γ` and `M_Γ^η = M_Γ + ηE₂` as scheme elements: closed-form spectra,
//! matrix-free (inverse) application and infinity-norm formulas.
//!
//! All formulas are evaluated in exact rational arithmetic; doubles appear
//! only when an operator is applied to a vector.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::PartiteStructure;
use crate::rational::{self, binom_q, frac, int, pow, Rational};
use crate::scheme::{valencies, EdgeVector, Eigenmatrices, SchemeElement, SchemeOperator};

/// `M_Γ = C(r−2,s−2)n^{s−2}A₀ + C(r−3,s−3)n^{s−3}A₃ + C(r−4,s−4)n^{s−4}A₅`.
pub fn mgamma_element(r: usize, s: usize, n: usize) -> SchemeElement {
    let (r, s, n) = (r as i64, s as i64, n as i64);
    let coef = |k: i64| {
        let b = binom_q(r - k, s - k);
        if b.is_zero() {
            b
        } else {
            b * pow(n, s - k)
        }
    };
    let z = Rational::zero;
    SchemeElement::adjacency([coef(2), z(), z(), coef(3), z(), coef(4)])
}

/// `η* = n^{s−2}·s/(s+2)`.
pub fn eta_star(s: usize, n: usize) -> Rational {
    let (s, n) = (s as i64, n as i64);
    pow(n, s - 2) * frac(s, s + 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumTable {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    #[serde(serialize_with = "rational::ser::many")]
    pub eigenvalues: Vec<Rational>,
    pub eigenvalues_f64: Vec<f64>,
    pub multiplicities: Vec<u64>,
    #[serde(serialize_with = "rational::ser::opt")]
    pub eta: Option<Rational>,
}

impl SpectrumTable {
    pub fn eigenvalue_array(&self) -> [Rational; 6] {
        std::array::from_fn(|i| self.eigenvalues[i].clone())
    }

    /// Whether every eigenvalue on a non-trivial eigenspace is positive.
    pub fn is_positive_definite(&self) -> bool {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .all(|(l, &m)| m == 0 || l.is_positive())
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicities.iter().sum()
    }
}

fn check_spectral(r: usize, s: usize) -> Result<()> {
    if s < 3 || s >= r {
        return Err(Error::InvalidParameters(format!("spectrum needs 3 ≤ s < r, got r = {r}, s = {s}")));
    }
    if r < 4 {
        return Err(Error::InvalidParameters(format!("spectrum needs r ≥ 4, got {r}")));
    }
    Ok(())
}

/// Closed-form eigenvalues and multiplicities of `M_Γ`, or of `M_Γ^η` when
/// `eta` is given (only for `r = s+1`, where it replaces the zero eigenvalue
/// on `U₂`).
pub fn spectrum(r: usize, s: usize, n: usize, eta: Option<Rational>) -> Result<SpectrumTable> {
    check_spectral(r, s)?;
    if eta.is_some() && r != s + 1 {
        return Err(Error::InvalidParameters(format!(
            "the η shift applies only when r = s + 1 (r = {r}, s = {s})"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("part size n must be at least 1".into()));
    }
    let (ri, si, ni) = (r as i64, s as i64, n as i64);
    let base = binom_q(ri - 2, si - 2) * pow(ni, si - 2);
    let mut eigenvalues = vec![
        &base * frac(si * (si - 1), 2),
        &base * frac((ri - si) * (si - 1), ri - 2),
        &base * frac((ri - si - 1) * (ri - si), (ri - 2) * (ri - 3)),
        &base * int(si - 1),
        &base * frac(ri - si, ri - 2),
        base.clone(),
    ];
    if let Some(eta) = &eta {
        eigenvalues[2] = eta.clone();
    }
    let (ru, nu) = (r as u64, n as u64);
    let multiplicities = vec![
        1,
        ru - 1,
        ru * (ru - 3) / 2,
        ru * (nu - 1),
        ru * (ru - 2) * (nu - 1),
        ru * (ru - 1) / 2 * (nu - 1) * (nu - 1),
    ];
    Ok(SpectrumTable {
        r,
        s,
        n,
        eigenvalues_f64: eigenvalues.iter().map(rational::to_f64).collect(),
        eigenvalues,
        multiplicities,
        eta,
    })
}

/// The same eigenvalues obtained by pushing `mgamma_element` through the
/// first eigenmatrix `C`.
pub fn spectrum_via_eigenmatrices(r: usize, s: usize, n: usize) -> Result<[Rational; 6]> {
    check_spectral(r, s)?;
    let em = Eigenmatrices::new(r, n)?;
    Ok(mgamma_element(r, s, n).to_idempotent_basis(&em).coeffs)
}

/// `Σ_j |Σ_i D(i,j)/μ_i|·p_jj^0`, the infinity norm of `Σ_i μ_i⁻¹ E_i`.
pub fn inverse_norm_via_scheme(r: usize, n: usize, eigenvalues: &[Rational; 6]) -> Result<Rational> {
    let em = Eigenmatrices::new(r, n)?;
    if eigenvalues.iter().any(Zero::is_zero) {
        return Err(Error::Singular("zero eigenvalue".into()));
    }
    let val = valencies(r, n)?;
    Ok((0..6)
        .map(|j| {
            let coef: Rational = (0..6).map(|i| &em.d[i][j] / &eigenvalues[i]).sum();
            coef.abs() * int(val[j])
        })
        .sum())
}

/// `‖M_Γ⁻¹‖∞` for `r ≥ s+2`.
pub fn norm_mgamma_inverse(r: usize, s: usize, n: usize) -> Result<Rational> {
    if s < 3 || r < s + 2 {
        return Err(Error::InvalidParameters(format!("‖M_Γ⁻¹‖∞ formula needs s ≥ 3, r ≥ s + 2 (r = {r}, s = {s})")));
    }
    let (r, s, n) = (r as i64, s as i64, n as i64);
    let quad = r * r * (2 * s * s - 4 * s + 1) - r * (12 * s * s - 26 * s + 9) + (17 * s * s - 39 * s + 16);
    let denom = int(s * (s - 1) * (r - 2) * (r - s - 1)) * binom_q(r - 3, s - 2) * pow(n, s - 2);
    Ok(int(2 * quad) / denom)
}

/// `‖(M_Γ^{η*})⁻¹‖∞` for `r = s+1`.
pub fn norm_mgamma_eta_inverse(s: usize, n: usize) -> Result<Rational> {
    if s < 3 {
        return Err(Error::InvalidParameters(format!("s = {s} must be at least 3")));
    }
    let (s, n) = (s as i64, n as i64);
    let cubic = 3 * s * s * s - 11 * s * s + 12 * s - 3;
    let t = (s - 1) * (s - 2) * (s - 2);
    let poly = int(cubic * n * n - 2 * t * n + t);
    Ok(int(2) * pow(n, -s) / int(s * (s - 1) * (s - 1)) * poly)
}

/// Upper bound on `‖ΔM‖∞` when `δ̂(G) ≥ (1 − c)n`.
pub fn norm_delta_bound(r: usize, s: usize, n: usize, c: &Rational) -> Rational {
    let (r, s, n) = (r as i64, s as i64, n as i64);
    c * int(s * (s - 1) * (s + 1) * (r - 2)) / int(4) * binom_q(r - 3, s - 3) * pow(n, s - 2)
}

/// Upper bound on `‖E₂[E(G), E(Γ)∖E(G)]‖∞` for `r = s+1`.
pub fn norm_e2_block_bound(s: usize, c: &Rational) -> Rational {
    let s = s as i64;
    c * frac(4 * (s - 2), s)
}

/// Upper bound on `‖ΔM^η‖∞` for `r = s+1`.
pub fn norm_delta_eta_bound(s: usize, n: usize, c: &Rational, eta: &Rational) -> Rational {
    let (si, ni) = (s as i64, n as i64);
    c * int(si * (si - 1) * (si - 1) * (si - 2) * (si + 1)) / int(4) * pow(ni, si - 2)
        + norm_e2_block_bound(s, c) * eta
}

/// `‖M⁻¹‖∞·‖ΔM‖∞` bound used as the contraction certificate, with `M = M_Γ`
/// for `r ≥ s+2` and `M = M_Γ^{η*}` for `r = s+1`.
pub fn contraction_bound(structure: &PartiteStructure, c: &Rational) -> Result<Rational> {
    let PartiteStructure { r, s, n } = *structure;
    if r >= s + 2 {
        Ok(norm_mgamma_inverse(r, s, n)? * norm_delta_bound(r, s, n, c))
    } else if r == s + 1 {
        Ok(norm_mgamma_eta_inverse(s, n)? * norm_delta_eta_bound(s, n, c, &eta_star(s, n)))
    } else {
        Err(Error::InvalidParameters(format!("no contraction bound for r = s = {s}")))
    }
}

/// `M_Γ` or `M_Γ^η` as a matrix-free operator on `ℝ^{E(Γ)}`, plus its
/// inverse when every eigenvalue is non-zero.
#[derive(Clone, Debug)]
pub struct HostOperator {
    scheme: SchemeOperator,
    spectrum: SpectrumTable,
    forward: [f64; 6],
    inverse: Option<[f64; 6]>,
}

impl HostOperator {
    pub fn new(structure: &PartiteStructure, eta: Option<Rational>) -> Result<Self> {
        let PartiteStructure { r, s, n } = *structure;
        let spectrum = spectrum(r, s, n, eta)?;
        let scheme = SchemeOperator::new(r, n)?;
        let em = scheme.eigenmatrices();
        let lambdas = spectrum.eigenvalue_array();
        let forward = SchemeElement::idempotent(lambdas.clone()).adjacency_coeffs_f64(em);
        let inverse = if lambdas.iter().any(Zero::is_zero) {
            None
        } else {
            let inv: [Rational; 6] = std::array::from_fn(|i| lambdas[i].recip());
            Some(SchemeElement::idempotent(inv).adjacency_coeffs_f64(em))
        };
        Ok(Self { scheme, spectrum, forward, inverse })
    }

    pub fn scheme(&self) -> &SchemeOperator {
        &self.scheme
    }

    pub fn spectrum(&self) -> &SpectrumTable {
        &self.spectrum
    }

    pub fn eta(&self) -> Option<&Rational> {
        self.spectrum.eta.as_ref()
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn apply(&self, v: &EdgeVector) -> EdgeVector {
        self.scheme.apply_coefficients(&self.forward, v)
    }

    pub fn apply_inverse(&self, v: &EdgeVector) -> Result<EdgeVector> {
        let coeffs = self.inverse.as_ref().ok_or_else(|| {
            Error::Singular(format!(
                "M_Γ has a zero eigenvalue at r = {}, s = {}; supply an η shift",
                self.spectrum.r, self.spectrum.s
            ))
        })?;
        Ok(self.scheme.apply_coefficients(coeffs, v))
    }

    pub fn apply_e2(&self, v: &EdgeVector) -> EdgeVector {
        self.scheme.apply_idempotent(2, v)
    }
}
