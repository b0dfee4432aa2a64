use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::corpus::VariantStyle;
use crate::diversity::csv_field;

/// One metric's oracle score, per-style scores, drops and their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub metric: String,
    pub oracle: f64,
    pub per_style: BTreeMap<VariantStyle, f64>,
    pub drops: BTreeMap<VariantStyle, f64>,
    pub average_robustness: f64,
}

pub fn build_report(metric: &str, oracle: f64, per_style: &BTreeMap<VariantStyle, f64>) -> Result<RobustnessReport, MetricsError> {
    if per_style.contains_key(&VariantStyle::Original) {
        return Err(MetricsError::InvalidParameter("per-style scores must not include the original split".into()));
    }
    let mut scores = BTreeMap::new();
    for style in VariantStyle::VARIANTS {
        let s = *per_style.get(&style).ok_or(MetricsError::MissingStyle(style))?;
        if !s.is_finite() {
            return Err(MetricsError::InvalidParameter(format!("{style} score is not finite")));
        }
        scores.insert(style, s);
    }
    if !oracle.is_finite() {
        return Err(MetricsError::InvalidParameter("oracle score is not finite".into()));
    }
    let drops = scores.iter().map(|(&k, &v)| (k, oracle - v)).collect();
    let average_robustness = VariantStyle::VARIANTS.iter().map(|s| scores[s]).sum::<f64>() / VariantStyle::VARIANTS.len() as f64;
    Ok(RobustnessReport { metric: metric.to_string(), oracle, per_style: scores, drops, average_robustness })
}

impl RobustnessReport {
    /// Whether drops and the average follow from the oracle and per-style
    /// scores within `tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let expected = VariantStyle::VARIANTS.iter().map(|s| self.per_style.get(s).copied().unwrap_or(f64::NAN)).sum::<f64>() / 5.0;
        (self.average_robustness - expected).abs() <= tol
            && VariantStyle::VARIANTS.iter().all(|s| match (self.per_style.get(s), self.drops.get(s)) {
                (Some(v), Some(d)) => (self.oracle - v - d).abs() <= tol,
                _ => false,
            })
    }
}

/// Metric rows by style columns, one row per report.
pub fn reports_to_csv(reports: &[RobustnessReport]) -> String {
    let mut out = String::from("metric,oracle");
    for s in VariantStyle::VARIANTS {
        out.push(',');
        out.push_str(s.as_str());
    }
    out.push_str(",average\n");
    for r in reports {
        out.push_str(&format!("{},{:.4}", csv_field(&r.metric), r.oracle));
        for s in VariantStyle::VARIANTS {
            out.push_str(&format!(",{:.4}", r.per_style[&s]));
        }
        out.push_str(&format!(",{:.4}\n", r.average_robustness));
    }
    out
}
