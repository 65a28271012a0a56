//! Checking telescoping (WZ-style) certificates.
//!
//! A certificate of order `r` for a hypergeometric term `F(n, k)` consists of
//! polynomials `c_0(n), ..., c_r(n)` and a rational function `R(n, k)` such
//! that with `G = R F`
//!
//! ```text
//! Σ_{j=0}^{r} (-1)^{r-j} c_j(n) F(n+j, k) = G(n, k+1) - G(n, k).
//! ```
//!
//! Summing over `k` then shows that `Σ_k F(n, k)` satisfies the recurrence
//! with coefficients `c_j`. Certificates are produced elsewhere; this module
//! only verifies them.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::binom::{alt_sign, gen_binom, pow4};
use super::poly::{BivariatePolynomial, IntPolynomial, RationalFunction};

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("cannot read certificate {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate has no entry for family {0}")]
    MissingFamily(TermFamily),
    #[error("family {0} needs the parameter m")]
    MissingM(TermFamily),
    #[error("could not find {wanted} sample points off the poles after {tries} draws")]
    DenominatorVanishes { wanted: usize, tries: usize },
}

/// Summand families a certificate can be attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermFamily {
    /// `(-1)^k / (2n-2k+1) C(k, m) C(4n-1, 2n+2k-1)`
    F0,
    /// `(-1)^{m+1} 4^{n-k} / (2n-2k+1) C(2n-1, 2k-1) C(2k-m-2, k-2)`
    F1,
    /// `(-1)^m 4^{n-k} / (2n-2k+1) C(2n-1, 2k-1) C(2k-m-2, k-m)`
    F2,
    /// `C(n, k)`, summing to `2^n`.
    Binomial,
}

impl TermFamily {
    pub const ALL: [TermFamily; 4] = [
        TermFamily::F0,
        TermFamily::F1,
        TermFamily::F2,
        TermFamily::Binomial,
    ];

    pub fn needs_m(self) -> bool {
        !matches!(self, TermFamily::Binomial)
    }
}

impl fmt::Display for TermFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermFamily::F0 => "F0",
            TermFamily::F1 => "F1",
            TermFamily::F2 => "F2",
            TermFamily::Binomial => "binomial",
        })
    }
}

impl FromStr for TermFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TermFamily::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| format!("unknown term family {s:?}"))
    }
}

/// A concrete hypergeometric term: a family with its parameter `m` fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub family: TermFamily,
    pub m: i64,
}

fn q(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

fn qi(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Product of linear factors over product of linear factors; `None` when
/// the denominator vanishes.
fn ratio(num: &[BigRational], den: &[BigRational]) -> Option<BigRational> {
    let d: BigRational = den.iter().product();
    if d.is_zero() {
        return None;
    }
    Some(num.iter().product::<BigRational>() / d)
}

impl Term {
    pub fn new(family: TermFamily, m: i64) -> Self {
        Term { family, m }
    }

    /// Exact value at an integer point, with the generalized binomial
    /// conventions (0 below the support).
    pub fn value(&self, n: i64, k: i64) -> BigRational {
        let m = self.m;
        match self.family {
            TermFamily::F0 => {
                let d = 2 * n - 2 * k + 1;
                q(alt_sign(k) * gen_binom(k, m) * gen_binom(4 * n - 1, 2 * n + 2 * k - 1)) / qi(d)
            }
            TermFamily::F1 | TermFamily::F2 => {
                let (sign, lower) = if self.family == TermFamily::F1 {
                    (alt_sign(m + 1), k - 2)
                } else {
                    (alt_sign(m), k - m)
                };
                let binoms = gen_binom(2 * n - 1, 2 * k - 1) * gen_binom(2 * k - m - 2, lower);
                if binoms.is_zero() {
                    return BigRational::zero();
                }
                pow4(n - k) * q(sign * binoms) / qi(2 * n - 2 * k + 1)
            }
            TermFamily::Binomial => q(gen_binom(n, k)),
        }
    }

    /// `F(n+1, k) / F(n, k)` as a rational function of `(n, k)`.
    pub fn n_ratio(&self, n: &BigRational, k: &BigRational) -> Option<BigRational> {
        let c = |v: i64| qi(v);
        match self.family {
            TermFamily::F0 => ratio(
                &[c(4) * n, c(4) * n + c(1), c(4) * n + c(2), c(4) * n + c(3)],
                &[
                    c(2) * n + c(2) * k,
                    c(2) * n + c(2) * k + c(1),
                    c(2) * n - c(2) * k + c(2),
                    c(2) * n - c(2) * k + c(3),
                ],
            ),
            TermFamily::F1 | TermFamily::F2 => ratio(
                &[c(4), c(2) * n, c(2) * n + c(1)],
                &[c(2) * n - c(2) * k + c(2), c(2) * n - c(2) * k + c(3)],
            ),
            TermFamily::Binomial => ratio(&[n + c(1)], &[n + c(1) - k]),
        }
    }

    /// `F(n, k+1) / F(n, k)` as a rational function of `(n, k)`.
    pub fn k_ratio(&self, n: &BigRational, k: &BigRational) -> Option<BigRational> {
        let c = |v: i64| qi(v);
        let m = c(self.m);
        match self.family {
            TermFamily::F0 => ratio(
                &[
                    c(-1),
                    k + c(1),
                    c(2) * n - c(2) * k,
                    c(2) * n - c(2) * k + c(1),
                ],
                &[
                    k + c(1) - &m,
                    c(2) * n + c(2) * k,
                    c(2) * n + c(2) * k + c(1),
                ],
            ),
            // Both F1 and F2 are Γ(2k-m-1) / (Γ(k-1) Γ(k-m+1)) in k.
            TermFamily::F1 | TermFamily::F2 => ratio(
                &[
                    c(2) * n - c(2) * k,
                    c(2) * n - c(2) * k + c(1),
                    c(2) * k - &m - c(1),
                    c(2) * k - &m,
                ],
                &[c(4), c(2) * k, c(2) * k + c(1), k - c(1), k - &m + c(1)],
            ),
            TermFamily::Binomial => ratio(&[n - k], &[k + c(1)]),
        }
    }

    /// Largest total degree of the numerators and denominators of the two
    /// shift ratios.
    pub fn ratio_degree(&self) -> usize {
        match self.family {
            TermFamily::F0 => 4,
            TermFamily::F1 | TermFamily::F2 => 5,
            TermFamily::Binomial => 1,
        }
    }

    /// Inclusive `k` window outside which `F(n, k) = 0` for `n >= 1`.
    pub fn support(&self, n: i64) -> (i64, i64) {
        match self.family {
            TermFamily::F0 => (1 - n, n),
            TermFamily::F1 | TermFamily::F2 => (1, n),
            TermFamily::Binomial => (0, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub order: usize,
    /// `c_0, ..., c_order`
    pub coeffs: Vec<IntPolynomial>,
    /// `R_i` with `G_i = R_i F_i`.
    pub families: BTreeMap<TermFamily, RationalFunction>,
    pub m: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawRational {
    num: Vec<Vec<String>>,
    den: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawCertificate {
    order: usize,
    coeffs: Vec<Vec<String>>,
    families: BTreeMap<String, RawRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<i64>,
}

impl Certificate {
    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let raw: RawCertificate = serde_json::from_str(text)?;
        let bad = CertificateError::Malformed;
        if raw.order == 0 {
            return Err(bad("order must be at least 1".into()));
        }
        if raw.coeffs.len() != raw.order + 1 {
            return Err(bad(format!(
                "order {} needs {} coefficient polynomials, found {}",
                raw.order,
                raw.order + 1,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| IntPolynomial::from_strings(c).map_err(bad))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(bad("all recurrence coefficients are zero".into()));
        }
        if raw.families.is_empty() {
            return Err(bad("no families".into()));
        }
        let mut families = BTreeMap::new();
        for (name, rf) in &raw.families {
            let family: TermFamily = name.parse().map_err(bad)?;
            let num = BivariatePolynomial::from_strings(&rf.num).map_err(bad)?;
            let den = BivariatePolynomial::from_strings(&rf.den).map_err(bad)?;
            let rf = RationalFunction::new(num, den)
                .ok_or_else(|| bad(format!("family {name}: zero denominator")))?;
            families.insert(family, rf);
        }
        Ok(Certificate {
            order: raw.order,
            coeffs,
            families,
            m: raw.m,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, CertificateError> {
        let text = std::fs::read_to_string(path).map_err(|source| CertificateError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let raw = RawCertificate {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.to_strings()).collect(),
            families: self
                .families
                .iter()
                .map(|(f, rf)| {
                    (
                        f.to_string(),
                        RawRational {
                            num: rf.num().to_strings(),
                            den: rf.den().to_strings(),
                        },
                    )
                })
                .collect(),
            m: self.m,
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    /// Upper bound on the total degree of the identity after dividing by
    /// `F(n, k)` and clearing denominators.
    pub fn degree_bound(&self, term: &Term) -> usize {
        let rf = &self.families[&term.family];
        let c_deg = self
            .coeffs
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0);
        let rd = term.ratio_degree();
        c_deg + self.order * rd + 2 * rf.degree() + rd
    }

    fn sign(&self, j: usize) -> BigRational {
        if (self.order - j).is_multiple_of(2) {
            BigRational::one()
        } else {
            -BigRational::one()
        }
    }

    /// The telescoping identity divided by `F(n, k)`:
    /// `Σ_j ± c_j(n) F(n+j,k)/F(n,k) - [R(n,k+1) F(n,k+1)/F(n,k) - R(n,k)]`.
    /// `None` if any denominator vanishes at the point.
    pub fn generic_residual(
        &self,
        term: &Term,
        n: &BigRational,
        k: &BigRational,
    ) -> Option<BigRational> {
        let rf = &self.families[&term.family];
        let mut lhs = BigRational::zero();
        let mut shift = BigRational::one();
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                shift *= term.n_ratio(&(n + qi(j as i64 - 1)), k)?;
            }
            lhs += self.sign(j) * c.eval(n) * &shift;
        }
        let g_next = rf.eval(n, &(k + BigRational::one()))? * term.k_ratio(n, k)?;
        let g_here = rf.eval(n, k)?;
        Some(lhs - (g_next - g_here))
    }

    /// The identity at an integer point with exact values of `F`.
    /// `None` if `R` has a pole at `(n, k)` or `(n, k+1)`.
    pub fn integer_residual(&self, term: &Term, n: i64, k: i64) -> Option<BigRational> {
        let rf = &self.families[&term.family];
        let lhs: BigRational = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| self.sign(j) * q(c.eval_int(n)) * term.value(n + j as i64, k))
            .sum();
        let g = |kk: i64| rf.eval_int(n, kk).map(|r| r * term.value(n, kk));
        Some(lhs - (g(k + 1)? - g(k)?))
    }
}

/// Where a certificate check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailurePoint {
    pub n: BigRational,
    pub k: BigRational,
    pub residual: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub family: TermFamily,
    pub m: i64,
    pub order: usize,
    pub degree_bound: usize,
    pub samples_requested: usize,
    pub samples_used: usize,
    pub samples_rejected: usize,
    pub sample_failure: Option<FailurePoint>,
    pub integer_checked: usize,
    pub integer_skipped: usize,
    pub integer_failure: Option<FailurePoint>,
    /// `F` vanishes on a band of `k` outside its support for each tested `n`.
    pub support_ok: bool,
    pub passed: bool,
}

/// Largest `n` and `|k| - n` covered by the integer-point sweep.
pub const INTEGER_N_MAX: i64 = 8;
pub const INTEGER_K_MARGIN: i64 = 4;
const SUPPORT_BAND: i64 = 12;

/// Verifies the certificate for one family.
///
/// Random points are rationals `p/q` with `|p| < 2^31`, `1 <= q < 2^20`,
/// drawn from a ChaCha8 stream seeded with `seed`; points on a pole are
/// redrawn. At least `degree_bound + 1` points are used. The integer sweep
/// covers `1 <= n <= 8`, `|k| <= n + 4`, skipping points where `R` has a
/// pole.
pub fn verify_certificate(
    cert: &Certificate,
    family: TermFamily,
    m: Option<i64>,
    samples: usize,
    seed: u64,
) -> Result<CertificateReport, CertificateError> {
    if !cert.families.contains_key(&family) {
        return Err(CertificateError::MissingFamily(family));
    }
    let m = match (m.or(cert.m), family.needs_m()) {
        (Some(m), _) => m,
        (None, false) => 0,
        (None, true) => return Err(CertificateError::MissingM(family)),
    };
    let term = Term::new(family, m);
    let degree_bound = cert.degree_bound(&term);
    let wanted = samples.max(degree_bound + 1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = 0;
    let mut rejected = 0;
    let mut sample_failure = None;
    let max_tries = 20 * wanted + 100;
    while used < wanted {
        if used + rejected >= max_tries {
            return Err(CertificateError::DenominatorVanishes {
                wanted,
                tries: used + rejected,
            });
        }
        let mut draw = || {
            let p: i64 = rng.gen_range(-(1i64 << 31)..(1i64 << 31));
            let d: i64 = rng.gen_range(1..(1i64 << 20));
            BigRational::new(p.into(), d.into())
        };
        let (n, k) = (draw(), draw());
        match cert.generic_residual(&term, &n, &k) {
            None => rejected += 1,
            Some(r) => {
                used += 1;
                if !r.is_zero() && sample_failure.is_none() {
                    sample_failure = Some(FailurePoint { n, k, residual: r });
                }
            }
        }
    }

    let mut integer_checked = 0;
    let mut integer_skipped = 0;
    let mut integer_failure = None;
    for n in 1..=INTEGER_N_MAX {
        for k in -(n + INTEGER_K_MARGIN)..=n + INTEGER_K_MARGIN {
            match cert.integer_residual(&term, n, k) {
                None => integer_skipped += 1,
                Some(r) => {
                    integer_checked += 1;
                    if !r.is_zero() && integer_failure.is_none() {
                        integer_failure = Some(FailurePoint {
                            n: qi(n),
                            k: qi(k),
                            residual: r,
                        });
                    }
                }
            }
        }
    }

    let support_ok = (1..=INTEGER_N_MAX).all(|n| {
        let (lo, hi) = term.support(n);
        (lo - SUPPORT_BAND..lo)
            .chain(hi + 1..=hi + SUPPORT_BAND)
            .all(|k| term.value(n, k).is_zero())
    });

    let passed = sample_failure.is_none() && integer_failure.is_none() && support_ok;
    Ok(CertificateReport {
        family,
        m,
        order: cert.order,
        degree_bound,
        samples_requested: samples,
        samples_used: used,
        samples_rejected: rejected,
        sample_failure,
        integer_checked,
        integer_skipped,
        integer_failure,
        support_ok,
        passed,
    })
}

/// The classical certificate for `Σ_k C(n, k) = 2^n`:
/// `F(n+1, k) - 2 F(n, k) = G(n, k+1) - G(n, k)` with
/// `G(n, k) = -k / (n - k + 1) · C(n, k) = -C(n, k-1)`.
pub fn classical_binomial_certificate() -> Certificate {
    let int = |v: i64| BigInt::from(v);
    let num = BivariatePolynomial::new(vec![vec![int(0), int(-1)]]);
    let den = BivariatePolynomial::new(vec![vec![int(1), int(-1)], vec![int(1)]]);
    let mut families = BTreeMap::new();
    families.insert(
        TermFamily::Binomial,
        RationalFunction::new(num, den).expect("nonzero"),
    );
    Certificate {
        order: 1,
        coeffs: vec![IntPolynomial::constant(2), IntPolynomial::constant(1)],
        families,
        m: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Shift ratios must agree with quotients of exact values wherever both
    /// are defined and nonzero.
    #[test]
    fn ratios_match_values() {
        for family in [
            TermFamily::F0,
            TermFamily::F1,
            TermFamily::F2,
            TermFamily::Binomial,
        ] {
            for m in 1..=4 {
                let t = Term::new(family, m);
                for n in 1..=6 {
                    for k in -8..=8 {
                        let here = t.value(n, k);
                        if here.is_zero() {
                            continue;
                        }
                        let (nq, kq) = (qi(n), qi(k));
                        let up = t.value(n + 1, k);
                        if !up.is_zero() {
                            if let Some(r) = t.n_ratio(&nq, &kq) {
                                assert_eq!(r, &up / &here, "{family} m={m} n-shift at ({n},{k})");
                            }
                        }
                        let right = t.value(n, k + 1);
                        if !right.is_zero() {
                            if let Some(r) = t.k_ratio(&nq, &kq) {
                                assert_eq!(
                                    r,
                                    &right / &here,
                                    "{family} m={m} k-shift at ({n},{k})"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classical_fixture_passes() {
        let cert = classical_binomial_certificate();
        let report = verify_certificate(&cert, TermFamily::Binomial, None, 20, 7).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.samples_used > report.degree_bound);
        assert!(report.integer_checked > 0);
    }

    #[test]
    fn perturbed_fixture_fails() {
        let mut cert = classical_binomial_certificate();
        cert.coeffs[0] = IntPolynomial::constant(3);
        let report = verify_certificate(&cert, TermFamily::Binomial, None, 20, 7).unwrap();
        assert!(!report.passed);
        assert!(report.sample_failure.is_some());
        assert!(report.integer_failure.is_some());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let cert = classical_binomial_certificate();
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(matches!(
            Certificate::from_json(
                r#"{"order":1,"coeffs":[["1"]],"families":{"binomial":{"num":[["1"]],"den":[["1"]]}}}"#
            ),
            Err(CertificateError::Malformed(_))
        ));
        assert!(matches!(
            Certificate::from_json(
                r#"{"order":1,"coeffs":[["1"],["1"]],"families":{"binomial":{"num":[["1"]],"den":[["0"]]}}}"#
            ),
            Err(CertificateError::Malformed(_))
        ));
        assert!(matches!(
            Certificate::from_json(
                r#"{"order":1,"coeffs":[["1"],["x"]],"families":{"binomial":{"num":[["1"]],"den":[["1"]]}}}"#
            ),
            Err(CertificateError::Malformed(_))
        ));
        assert!(matches!(
            Certificate::from_json("{"),
            Err(CertificateError::Json(_))
        ));
    }

    #[test]
    fn missing_family_or_m() {
        let cert = classical_binomial_certificate();
        assert!(matches!(
            verify_certificate(&cert, TermFamily::F0, Some(1), 5, 0),
            Err(CertificateError::MissingFamily(TermFamily::F0))
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let cert = classical_binomial_certificate();
        let a = verify_certificate(&cert, TermFamily::Binomial, None, 10, 99).unwrap();
        let b = verify_certificate(&cert, TermFamily::Binomial, None, 10, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn supports() {
        for family in [TermFamily::F0, TermFamily::F1, TermFamily::F2] {
            let t = Term::new(family, 1);
            for n in 1..=5 {
                let (lo, hi) = t.support(n);
                assert!((lo - 5..lo).all(|k| t.value(n, k).is_zero()));
                assert!((hi + 1..hi + 5).all(|k| t.value(n, k).is_zero()));
            }
        }
    }
}
