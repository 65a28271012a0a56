//! One function per verification suite. Each returns a report whose cells
//! are sorted deterministically.

use mzv_shuffle::exact::certificate::{verify_certificate, Certificate, CertificateError};
use mzv_shuffle::exact::identities::{
    initial_values_check, inner_sum_reduction, lr_sides, r_closed, rational_string,
    replace_outer_sum_check, Family, IdentityError,
};
use mzv_shuffle::exact::recurrence::{search_recurrence, Recurrence, RecurrenceError};
use mzv_shuffle::exact::BigRational;
use mzv_shuffle::numeric::{theorem_lhs, theorem_rhs, x_identity_check, NumericError};
use mzv_shuffle::shuffle::{lemma2_check, lemma3_sides, ShuffleError};
use mzv_shuffle::Parity;
use serde_json::json;
use thiserror::Error;

use crate::report::VerificationReport;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error("{0}")]
    Config(String),
}

fn qs(r: &BigRational) -> String {
    rational_string(r)
}

pub fn lemma2(p_max: usize, q_max: usize) -> VerificationReport {
    let mut report =
        VerificationReport::new("verify-lemma2", json!({"p_max": p_max, "q_max": q_max}));
    for p in 0..=p_max {
        for q in 0..=q_max {
            let r = lemma2_check(p, q);
            let details = match &r.first_difference {
                None => format!("lhs {} words, rhs {} words", r.lhs_terms, r.rhs_terms),
                Some((w, a, b)) => format!("first difference at {w}: lhs {a}, rhs {b}"),
            };
            report.push(format!("p={p} q={q}"), r.passed, details, None);
        }
    }
    report
}

pub fn lemma3(n_max: usize) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("verify-lemma3", json!({"n_max": n_max}));
    for parity in Parity::BOTH {
        for n in 1..=n_max {
            for m in 1..=n {
                let (lhs, rhs) = lemma3_sides(parity, m, n)?;
                let details = match lhs.first_difference(&rhs) {
                    None => format!("{} words", lhs.len()),
                    Some((w, a, b)) => format!("first difference at {w}: lhs {a}, rhs {b}"),
                };
                report.push(format!("{parity} m={m} n={n}"), lhs == rhs, details, None);
            }
        }
    }
    Ok(report)
}

/// Extra `j` range used for the outer-sum extension cells.
pub const OUTER_EXTRA: i64 = 5;

pub fn identities(
    families: &[Family],
    m_max: i64,
    n_max: i64,
) -> Result<VerificationReport, SuiteError> {
    let names: Vec<String> = families.iter().map(|f| f.to_string()).collect();
    let mut report = VerificationReport::new(
        "verify-identities",
        json!({"families": names, "m_max": m_max, "n_max": n_max, "outer_extra": OUTER_EXTRA}),
    );
    for &family in families {
        for m in 1..=m_max {
            for n in 1..=n_max {
                let (l, r) = lr_sides(family, m, n)?;
                let equal = l == r;
                let data = json!({
                    "family": family.to_string(), "m": m, "n": n,
                    "equal": equal, "lhs": qs(&l), "rhs": qs(&r),
                });
                report.push(
                    format!("{family} m={m} n={n}"),
                    equal,
                    format!("L = {}, R = {}", qs(&l), qs(&r)),
                    Some(data),
                );
            }
        }
    }
    for &family in families {
        if !matches!(family, Family::PowerOdd | Family::PowerEven) {
            continue;
        }
        let parity = family.parity();
        for m in 1..=m_max {
            for n in 1..=n_max {
                let r = replace_outer_sum_check(parity, m, n, m + OUTER_EXTRA)?;
                let details = if r.passed {
                    format!("sum to j={} equals sum to j={m}", r.jmax)
                } else {
                    format!(
                        "truncated {} vs extended {}, nonzero extra j: {:?}",
                        qs(&r.truncated),
                        qs(&r.extended),
                        r.nonzero_extra
                    )
                };
                report.push(
                    format!("outer-{parity} m={m} n={n}"),
                    r.passed,
                    details,
                    None,
                );
            }
        }
    }
    Ok(report)
}

pub fn reduction(k_max: i64, m_max: i64) -> VerificationReport {
    let mut report =
        VerificationReport::new("verify-reduction", json!({"k_max": k_max, "m_max": m_max}));
    for k in 1..=k_max {
        for m in 1..=m_max {
            let (direct, closed) = inner_sum_reduction(k, m);
            report.push(
                format!("k={k} m={m}"),
                direct == closed,
                format!("direct = {}, closed = {}", qs(&direct), qs(&closed)),
                None,
            );
        }
    }
    report
}

pub fn rclosed(m_max: i64, n_max: i64) -> Result<VerificationReport, SuiteError> {
    let mut report =
        VerificationReport::new("verify-rclosed", json!({"m_max": m_max, "n_max": n_max}));
    for m in 1..=m_max {
        for n in 1..=n_max {
            let closed = r_closed(m, n);
            let (_, rhs) = lr_sides(Family::BinomOdd, m, n)?;
            report.push(
                format!("m={m} n={n}"),
                closed == rhs,
                format!("closed = {}, R = {}", qs(&closed), qs(&rhs)),
                None,
            );
        }
    }
    Ok(report)
}

pub const INITIAL_M_MAX: i64 = 12;

pub fn initial() -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new(
        "verify-initial",
        json!({"m_max": INITIAL_M_MAX, "n": [1, 2, 3]}),
    );
    for cell in initial_values_check(INITIAL_M_MAX)? {
        report.push(
            format!("m={} n={}", cell.m, cell.n),
            cell.passed,
            format!(
                "expected {}, L = {}, R = {}",
                qs(&cell.expected),
                qs(&cell.lhs),
                qs(&cell.rhs)
            ),
            Some(json!({
                "m": cell.m, "n": cell.n, "expected": qs(&cell.expected),
                "lhs": qs(&cell.lhs), "rhs": qs(&cell.rhs),
            })),
        );
    }
    Ok(report)
}

fn theorem_cell(
    report: &mut VerificationReport,
    m: usize,
    n: usize,
    rtol: f64,
) -> Result<(), SuiteError> {
    let rhs = theorem_rhs(m, n);
    let lhs = theorem_lhs(m, n, rtol * rhs.abs() / 10.0)?;
    let rel = (lhs.value - rhs).abs() / rhs.abs();
    report.push(
        format!("m={m} n={n}"),
        rel <= rtol,
        format!(
            "lhs = {:.15e} (bound {:.1e}), rhs = {:.15e}, rel diff {:.2e}",
            lhs.value, lhs.abs_error_bound, rhs, rel
        ),
        Some(json!({"m": m, "n": n, "lhs": lhs, "rhs": rhs, "rel_diff": rel})),
    );
    Ok(())
}

pub fn theorem(m: usize, n: usize, rtol: f64) -> Result<VerificationReport, SuiteError> {
    let mut report =
        VerificationReport::new("verify-theorem", json!({"m": m, "n": n, "rtol": rtol}));
    theorem_cell(&mut report, m, n, rtol)?;
    Ok(report)
}

/// All `(m, n)` with `m, n >= 1` and `4n + 2m <= weight_max`.
pub fn theorem_grid(weight_max: usize, rtol: f64) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new(
        "verify-theorem-grid",
        json!({"weight_max": weight_max, "rtol": rtol}),
    );
    for n in 1..=weight_max.saturating_sub(2) / 4 {
        for m in 1..=(weight_max - 4 * n) / 2 {
            theorem_cell(&mut report, m, n, rtol)?;
        }
    }
    Ok(report)
}

pub fn x_identities(n_max: usize, rtol: f64) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("verify-x", json!({"n_max": n_max, "rtol": rtol}));
    for parity in Parity::BOTH {
        for n in 1..=n_max {
            for j in 1..=n {
                // Scale the target to the size of the value.
                let twos = match parity {
                    Parity::Odd => 2 * j - 1,
                    Parity::Even => 2 * j,
                };
                let scale = theorem_rhs(twos, n - j);
                let r = x_identity_check(n, j, parity, rtol * scale / 10.0)?;
                let rel = r.rel_diff();
                report.push(
                    format!("{parity} n={n} j={j}"),
                    rel <= rtol,
                    format!(
                        "∫T = {:.15e}, ζ(⧢) = {:.15e}, rel diff {:.2e}, words equal: {} ({} vs {} words)",
                        r.lhs.value, r.rhs.value, rel, r.words_equal, r.lhs_words, r.rhs_words
                    ),
                    Some(json!({
                        "parity": parity.to_string(), "n": n, "j": j,
                        "lhs": r.lhs, "rhs": r.rhs, "rel_diff": rel,
                        "words_equal": r.words_equal,
                        "lhs_words": r.lhs_words, "rhs_words": r.rhs_words,
                    })),
                );
            }
        }
    }
    Ok(report)
}

pub fn family_sequence(
    family: Family,
    m: i64,
    n_max: i64,
) -> Result<(Vec<BigRational>, Vec<BigRational>), SuiteError> {
    let mut ls = Vec::new();
    let mut rs = Vec::new();
    for n in 1..=n_max {
        let (l, r) = lr_sides(family, m, n)?;
        ls.push(l);
        rs.push(r);
    }
    Ok((ls, rs))
}

pub fn recurrence_string(rec: &Recurrence) -> String {
    let order = rec.order();
    let parts: Vec<String> = rec
        .coeffs
        .iter()
        .enumerate()
        .rev()
        .map(|(j, c)| {
            let sign = if (order - j).is_multiple_of(2) { "+" } else { "-" };
            let arg = if j == 0 {
                "n".to_string()
            } else {
                format!("n+{j}")
            };
            format!("{sign} ({c}) A({arg})")
        })
        .collect();
    format!("{} = 0", parts.join(" "))
}

#[derive(Debug, Clone, Copy)]
pub struct RecurrenceConfig {
    pub family: Family,
    pub m: i64,
    pub order: usize,
    pub degree: usize,
    pub fit_max: i64,
    pub check_max: i64,
}

pub fn discover(
    cfg: RecurrenceConfig,
) -> Result<(VerificationReport, Option<Recurrence>), SuiteError> {
    let mut report = VerificationReport::new(
        "discover-recurrence",
        json!({
            "family": cfg.family.to_string(), "m": cfg.m, "order": cfg.order,
            "degree": cfg.degree, "fit_max": cfg.fit_max, "check_max": cfg.check_max,
        }),
    );
    if cfg.check_max < cfg.fit_max {
        return Err(SuiteError::Config(
            "--check-max must be at least --fit-max".into(),
        ));
    }
    let (ls, rs) = family_sequence(cfg.family, cfg.m, cfg.check_max)?;
    let rec = search_recurrence(&ls[..cfg.fit_max as usize], 1, cfg.order, cfg.degree)?;
    let Some(rec) = rec else {
        report.push("fit", false, "none found", None);
        return Ok((report, None));
    };
    let coeffs: Vec<Vec<String>> = rec.coeffs.iter().map(|c| c.to_strings()).collect();
    report.push(
        "fit",
        true,
        format!(
            "order {}, degree {}: {}",
            rec.order(),
            rec.max_degree(),
            recurrence_string(&rec)
        ),
        Some(json!({"order": rec.order(), "degree": rec.max_degree(), "coeffs": coeffs})),
    );
    for (name, values) in [("L", &ls), ("R", &rs)] {
        let fail = rec.first_failure(values, 1);
        let details = match fail {
            None => format!("holds for all windows within n <= {}", cfg.check_max),
            Some(n) => format!("fails at n = {n}"),
        };
        report.push(
            format!("{name} n<={}", cfg.check_max),
            fail.is_none(),
            details,
            None,
        );
    }
    Ok((report, Some(rec)))
}

pub fn certificate(
    cert: &Certificate,
    samples: usize,
    seed: u64,
    source: &str,
) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new(
        "check-certificate",
        json!({"file": source, "samples": samples, "seed": seed, "order": cert.order, "m": cert.m}),
    );
    for &family in cert.families.keys() {
        let r = verify_certificate(cert, family, None, samples, seed)?;
        let mut details = format!(
            "degree bound {}, {} sample points ({} redrawn), {} integer points ({} skipped at poles), support {}",
            r.degree_bound,
            r.samples_used,
            r.samples_rejected,
            r.integer_checked,
            r.integer_skipped,
            if r.support_ok { "ok" } else { "VIOLATED" }
        );
        if let Some(f) = &r.sample_failure {
            details += &format!("; first failing sample n = {}, k = {}", qs(&f.n), qs(&f.k));
        }
        if let Some(f) = &r.integer_failure {
            details += &format!(
                "; first failing integer point n = {}, k = {}",
                qs(&f.n),
                qs(&f.k)
            );
        }
        let key = if family.needs_m() {
            format!("{family} m={}", r.m)
        } else {
            family.to_string()
        };
        report.push(
            key,
            r.passed,
            details,
            Some(json!({
                "degree_bound": r.degree_bound, "samples_used": r.samples_used,
                "samples_rejected": r.samples_rejected, "integer_checked": r.integer_checked,
                "integer_skipped": r.integer_skipped, "support_ok": r.support_ok,
            })),
        );
    }
    Ok(report)
}
