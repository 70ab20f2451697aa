use std::collections::BTreeSet;

use serde::Serialize;

use super::{fmt_f64, AnalyticsError};
use crate::treebank::Session;

/// Significance level for the trend flag. No multiple-comparison
/// correction is applied.
pub const SIGNIFICANCE: f64 = 0.01;

/// Sessions averaged by the plot smoother.
pub const SMOOTHING_WINDOW: usize = 5;

/// Ordinary least squares fit of y on x with a two-sided t-test on the
/// slope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Regression {
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub t: f64,
    pub p: f64,
}

impl Regression {
    pub fn significant(&self) -> bool {
        self.p < SIGNIFICANCE
    }
}

/// Needs at least 3 points and some spread in x.
pub fn ols(xs: &[f64], ys: &[f64]) -> Result<Regression, AnalyticsError> {
    assert_eq!(xs.len(), ys.len(), "ols needs paired samples");
    let n = xs.len();
    let insufficient = AnalyticsError::InsufficientData { sessions: n };
    if n < 3 {
        return Err(insufficient);
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(insufficient);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let df = nf - 2.0;
    let (t, p) = if sse == 0.0 {
        // A perfect fit: the slope is either exactly zero or infinitely
        // significant.
        if slope == 0.0 {
            (0.0, 1.0)
        } else {
            (slope.signum() * f64::INFINITY, 0.0)
        }
    } else {
        let se = (sse / df / sxx).sqrt();
        let t = slope / se;
        (t, student_t_two_sided(t, df))
    };
    Ok(Regression {
        n,
        slope,
        intercept,
        t,
        p,
    })
}

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7.
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// I_x(a, b), by continued fraction.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Centered moving average. Near the ends the window shrinks to the points
/// that exist.
pub fn smooth(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelTrend {
    pub label: String,
    pub regression: Regression,
    pub significant: bool,
    /// (age in months, share of the session's sentences containing the label)
    pub points: Vec<(f64, f64)>,
    /// Plot data; the regression always uses the raw points.
    pub smoothed: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    pub sessions: usize,
    pub significance: f64,
    pub correction: &'static str,
    pub smoothing_window: Option<usize>,
    pub labels: Vec<LabelTrend>,
}

impl TrendReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("label\tslope\tintercept\tt\tp\tsignificant\n");
        for l in &self.labels {
            let r = &l.regression;
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                l.label,
                fmt_f64(r.slope),
                fmt_f64(r.intercept),
                fmt_f64(r.t),
                fmt_f64(r.p),
                l.significant
            ));
        }
        out
    }

    /// One row per label and session, for external plotting.
    pub fn plot_tsv(&self) -> String {
        let mut out = String::from("label\tage_months\tproportion\tsmoothed\n");
        for l in &self.labels {
            for (i, (age, prop)) in l.points.iter().enumerate() {
                let sm = l.smoothed.as_ref().map_or(*prop, |s| s[i]);
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    l.label,
                    fmt_f64(*age),
                    fmt_f64(*prop),
                    fmt_f64(sm)
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trends serialize")
    }
}

/// Regresses, for every label, the per-session share of sentences that
/// contain it on the child's age. Sessions without sentences are left out.
pub fn longitudinal_trends(
    sessions: &[Session],
    smoothing: Option<usize>,
) -> Result<TrendReport, AnalyticsError> {
    let mut used: Vec<&Session> = sessions.iter().filter(|s| !s.trees.is_empty()).collect();
    used.sort_by(|a, b| a.child_age_months.total_cmp(&b.child_age_months));
    let ages: Vec<f64> = used.iter().map(|s| s.child_age_months).collect();
    let labels: BTreeSet<&str> = used
        .iter()
        .flat_map(|s| &s.trees)
        .flat_map(|t| &t.tokens)
        .map(|t| t.deprel.as_str())
        .collect();
    // Fails once for the whole corpus: every label shares the same ages.
    ols(&ages, &vec![0.0; ages.len()])?;
    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        let props: Vec<f64> = used
            .iter()
            .map(|s| {
                let with = s
                    .trees
                    .iter()
                    .filter(|t| t.tokens.iter().any(|tok| tok.deprel == label))
                    .count();
                with as f64 / s.trees.len() as f64
            })
            .collect();
        let regression = ols(&ages, &props)?;
        out.push(LabelTrend {
            label: label.to_string(),
            significant: regression.significant(),
            regression,
            points: ages.iter().copied().zip(props.iter().copied()).collect(),
            smoothed: smoothing.map(|w| smooth(&props, w)),
        });
    }
    Ok(TrendReport {
        sessions: used.len(),
        significance: SIGNIFICANCE,
        correction: "none",
        smoothing_window: smoothing,
        labels: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let r = ols(&[20.0, 21.0, 22.0], &[0.1, 0.2, 0.3]).unwrap();
        assert!((r.slope - 0.1).abs() < 1e-12);
        assert!(r.p < 1e-6);
        assert!(r.significant());
    }

    #[test]
    fn constant_series_is_flat() {
        let r = ols(&[1.0, 2.0, 3.0, 4.0], &[0.4; 4]).unwrap();
        assert_eq!(r.slope, 0.0);
        assert!(!r.significant());
    }

    #[test]
    fn too_few_points() {
        assert!(ols(&[1.0, 2.0], &[0.0, 1.0]).is_err());
        assert!(ols(&[3.0, 3.0, 3.0], &[0.0, 1.0, 0.5]).is_err());
    }

    #[test]
    fn incomplete_beta_known_values() {
        // I_x(1, 1) = x and I_x(a, b) = 1 - I_{1-x}(b, a).
        assert!((regularized_incomplete_beta(1.0, 1.0, 0.3) - 0.3).abs() < 1e-14);
        let l = regularized_incomplete_beta(2.5, 0.5, 0.7);
        let r = 1.0 - regularized_incomplete_beta(0.5, 2.5, 0.3);
        assert!((l - r).abs() < 1e-14);
        // t = 2.0 with 10 df: two-sided p = 0.07338803477074...
        assert!((student_t_two_sided(2.0, 10.0) - 0.073_388_034_770_740_44).abs() < 1e-12);
    }

    #[test]
    fn smoothing_shrinks_at_the_edges() {
        let s = smooth(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0], 5);
        assert_eq!(s, vec![1.0, 1.5, 2.0, 3.0, 3.5, 4.0]);
    }
}
