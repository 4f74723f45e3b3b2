//! Metric specifications: a browsing model paired with a gain aggregation,
//! evaluated to a fixed depth under a truncation policy.
//!
//! The metric score is the expectation of the aggregated utility over the
//! stopping distribution: `M = sum_i L(i) * A(i)`.

use crate::agg::{Aggregation, DEFAULT_PE_BETA};
use crate::gain::{GainScheme, GainVector};
use crate::model::{continuation_profile, reach_probabilities, BrowsingModel, TruncationPolicy};
use crate::{Error, Result};

/// A fully specified, validated metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    model: BrowsingModel,
    agg: Aggregation,
    depth: usize,
    truncation: TruncationPolicy,
    gain_scheme: GainScheme,
}

impl MetricSpec {
    /// Validates parameters and rejects model/aggregation cells whose score
    /// cannot rank systems. Pairing a gain-independent browsing model
    /// (`precision`, `dcg`, `rbp`) with the gain-independent `err`
    /// aggregation collapses the score to a constant, so those three cells
    /// are refused.
    pub fn new(
        model: BrowsingModel,
        agg: Aggregation,
        depth: usize,
        truncation: TruncationPolicy,
        gain_scheme: GainScheme,
    ) -> Result<Self> {
        model.validate()?;
        agg.validate()?;
        if depth == 0 {
            return Err(Error::InvalidSpec("depth must be at least 1".into()));
        }
        if !model.is_adaptive() && agg == Aggregation::Err {
            return Err(Error::InvalidSpec(format!(
                "{}+err is rejected: neither the stopping distribution nor the \
                 aggregation depends on the gains, so every ranking gets the same score",
                model.name()
            )));
        }
        Ok(MetricSpec {
            model,
            agg,
            depth,
            truncation,
            gain_scheme,
        })
    }

    pub fn model(&self) -> &BrowsingModel {
        &self.model
    }

    pub fn agg(&self) -> &Aggregation {
        &self.agg
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn truncation(&self) -> TruncationPolicy {
        self.truncation
    }

    /// Gain mapping scheme recorded for provenance in reports.
    pub fn gain_scheme(&self) -> GainScheme {
        self.gain_scheme
    }

    /// Whether this cell is the combination under which the model's
    /// traditional form is recovered: `erg` for every model except the
    /// `err` browsing model, whose traditional form uses the reciprocal-rank
    /// aggregation.
    pub fn is_canonical(&self) -> bool {
        match self.model {
            BrowsingModel::Err => self.agg == Aggregation::Err,
            _ => self.agg == Aggregation::Erg,
        }
    }

    /// Canonical label, e.g. `rbp@0.8+erg` or `err+err`; parses back via
    /// [`MetricSpec::parse`].
    pub fn label(&self) -> String {
        let model = match self.model {
            BrowsingModel::Precision { k } => format!("precision@{k}"),
            BrowsingModel::Dcg { k } => format!("dcg@{k}"),
            BrowsingModel::Rbp { p } => format!("rbp@{p}"),
            BrowsingModel::Inst { t } => format!("inst@{t}"),
            BrowsingModel::Ap => "ap".to_string(),
            BrowsingModel::Err => "err".to_string(),
        };
        let agg = match self.agg {
            Aggregation::Pe { beta } => format!("pe@{beta}"),
            other => other.name().to_string(),
        };
        format!("{model}+{agg}")
    }

    /// Parses a `MODEL[@PARAM]+AGG[@PARAM]` spec such as `rbp@0.8+erg`,
    /// `inst@2.25+max`, or `err+err`; depth, truncation, and gain scheme come
    /// from the job configuration.
    pub fn parse(
        text: &str,
        depth: usize,
        truncation: TruncationPolicy,
        gain_scheme: GainScheme,
    ) -> Result<Self> {
        let mut parts = text.split('+');
        let (model_text, agg_text) = match (parts.next(), parts.next(), parts.next()) {
            (Some(m), Some(a), None) if !m.is_empty() && !a.is_empty() => (m, a),
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "{text:?} does not match MODEL[@PARAM]+AGG[@PARAM]"
                )))
            }
        };
        let model = parse_model(model_text)?;
        let agg = parse_aggregation(agg_text)?;
        MetricSpec::new(model, agg, depth, truncation, gain_scheme)
    }
}

/// Parses the model half of a spec, e.g. `precision@10`, `rbp@0.8`, `ap`.
pub fn parse_model(text: &str) -> Result<BrowsingModel> {
    let (name, param) = split_param(text)?;
    let model = match (name, param) {
        ("precision", Some(k)) => BrowsingModel::Precision {
            k: parse_usize(k, text)?,
        },
        ("dcg", Some(k)) => BrowsingModel::Dcg {
            k: parse_usize(k, text)?,
        },
        ("rbp", Some(p)) => BrowsingModel::Rbp {
            p: parse_f64(p, text)?,
        },
        ("inst", Some(t)) => BrowsingModel::Inst {
            t: parse_f64(t, text)?,
        },
        ("ap", None) => BrowsingModel::Ap,
        ("err", None) => BrowsingModel::Err,
        ("precision" | "dcg" | "rbp" | "inst", None) => {
            return Err(Error::InvalidSpec(format!(
                "model {name:?} requires a parameter, e.g. {name}@10"
            )))
        }
        ("ap" | "err", Some(_)) => {
            return Err(Error::InvalidSpec(format!(
                "model {name:?} takes no parameter"
            )))
        }
        _ => {
            return Err(Error::InvalidSpec(format!(
                "unknown model {name:?} (expected precision, dcg, rbp, inst, ap, or err)"
            )))
        }
    };
    model.validate()?;
    Ok(model)
}

/// Parses the aggregation half of a spec, e.g. `erg`, `pe`, `pe@0.25`.
pub fn parse_aggregation(text: &str) -> Result<Aggregation> {
    let (name, param) = split_param(text)?;
    let agg = match (name, param) {
        ("erg", None) => Aggregation::Erg,
        ("etg", None) => Aggregation::Etg,
        ("avg", None) => Aggregation::Avg,
        ("max", None) => Aggregation::Max,
        ("fin", None) => Aggregation::Fin,
        ("pe", None) => Aggregation::Pe {
            beta: DEFAULT_PE_BETA,
        },
        ("pe", Some(beta)) => Aggregation::Pe {
            beta: parse_f64(beta, text)?,
        },
        ("erg" | "etg" | "avg" | "max" | "fin" | "err", Some(_)) => {
            return Err(Error::InvalidSpec(format!(
                "aggregation {name:?} takes no parameter"
            )))
        }
        ("err", None) => Aggregation::Err,
        _ => {
            return Err(Error::InvalidSpec(format!(
                "unknown aggregation {name:?} (expected erg, etg, avg, max, fin, pe, or err)"
            )))
        }
    };
    agg.validate()?;
    Ok(agg)
}

fn split_param(text: &str) -> Result<(&str, Option<&str>)> {
    let mut parts = text.split('@');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(name), param, None) if !name.is_empty() => Ok((name, param)),
        _ => Err(Error::InvalidSpec(format!(
            "{text:?} does not match NAME[@PARAM]"
        ))),
    }
}

fn parse_usize(param: &str, context: &str) -> Result<usize> {
    param.parse().map_err(|_| {
        Error::InvalidSpec(format!("{context:?}: {param:?} is not a positive integer"))
    })
}

fn parse_f64(param: &str, context: &str) -> Result<f64> {
    param
        .parse()
        .map_err(|_| Error::InvalidSpec(format!("{context:?}: {param:?} is not a number")))
}

/// Aggregations that form a rankable metric with `model`, in a fixed order.
pub fn valid_aggregations(model: &BrowsingModel) -> Vec<Aggregation> {
    let mut aggs = vec![
        Aggregation::Erg,
        Aggregation::Etg,
        Aggregation::Avg,
        Aggregation::Max,
        Aggregation::Fin,
        Aggregation::Pe {
            beta: DEFAULT_PE_BETA,
        },
    ];
    if model.is_adaptive() {
        aggs.push(Aggregation::Err);
    }
    aggs
}

/// Every valid (model, aggregation) cell for the given models.
pub fn combination_grid(
    models: &[BrowsingModel],
    depth: usize,
    truncation: TruncationPolicy,
    gain_scheme: GainScheme,
) -> Result<Vec<MetricSpec>> {
    let mut specs = Vec::new();
    for model in models {
        for agg in valid_aggregations(model) {
            specs.push(MetricSpec::new(
                *model,
                agg,
                depth,
                truncation,
                gain_scheme,
            )?);
        }
    }
    Ok(specs)
}

/// Scores one gain vector: `sum_i L(i) * A(i)` over ranks `1..=depth`.
///
/// The gain vector must have exactly the metric's depth, so that adaptive
/// models see the same horizon the gains were assembled for.
pub fn score(spec: &MetricSpec, gains: &GainVector) -> Result<f64> {
    if gains.depth() != spec.depth {
        return Err(Error::InvalidData(format!(
            "gain vector depth {} does not match metric depth {}",
            gains.depth(),
            spec.depth
        )));
    }
    let c = continuation_profile(&spec.model, gains, spec.depth, spec.truncation)?;
    let reach = reach_probabilities(&c);
    let v_plus: f64 = reach.iter().sum();
    if !v_plus.is_finite() {
        return Err(Error::NonFinite("expected inspection count".into()));
    }
    let slice = gains.as_slice();
    let mut prefix = 0.0;
    let mut peak = 0.0f64;
    let mut total = 0.0;
    for i in 1..=spec.depth {
        let r = slice[i - 1];
        prefix += r;
        peak = peak.max(r);
        let a = match spec.agg {
            Aggregation::Erg => prefix / v_plus,
            Aggregation::Etg => prefix,
            Aggregation::Avg => prefix / i as f64,
            Aggregation::Max => peak,
            Aggregation::Fin => r,
            Aggregation::Pe { beta } => beta * peak + (1.0 - beta) * r,
            Aggregation::Err => 1.0 / i as f64,
        };
        let l = (1.0 - c[i - 1]) * reach[i - 1];
        total += l * a;
    }
    if !total.is_finite() {
        return Err(Error::NonFinite(format!(
            "score of metric {}",
            spec.label()
        )));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::v_plus;
    use approx::assert_abs_diff_eq;

    fn gv(gains: &[f64]) -> GainVector {
        GainVector::new(gains.to_vec()).unwrap()
    }

    fn spec(
        model: BrowsingModel,
        agg: Aggregation,
        depth: usize,
        trunc: TruncationPolicy,
    ) -> MetricSpec {
        MetricSpec::new(model, agg, depth, trunc, GainScheme::Linear).unwrap()
    }

    #[test]
    fn perfect_precision_run_scores_one() {
        let s = spec(
            BrowsingModel::Precision { k: 10 },
            Aggregation::Erg,
            10,
            TruncationPolicy::StopAtDepth,
        );
        let gains = gv(&[1.0; 10]);
        assert_abs_diff_eq!(score(&s, &gains).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn err_metric_matches_cascade_hand_computation() {
        let s = spec(
            BrowsingModel::Err,
            Aggregation::Err,
            2,
            TruncationPolicy::OpenTail,
        );
        assert_abs_diff_eq!(score(&s, &gv(&[0.5, 0.5])).unwrap(), 0.625, epsilon = 1e-12);

        let s1 = spec(
            BrowsingModel::Err,
            Aggregation::Err,
            1,
            TruncationPolicy::OpenTail,
        );
        assert_abs_diff_eq!(score(&s1, &gv(&[0.5])).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rbp_rate_of_gain_rescales_to_the_textbook_form() {
        // Stopping at the horizon concentrates the tail mass on the last
        // rank, which makes score * v_plus equal the plain weighted gain sum;
        // scaling by (1 - p) then recovers the textbook geometric series.
        let p = 0.8;
        let s = spec(
            BrowsingModel::Rbp { p },
            Aggregation::Erg,
            10,
            TruncationPolicy::StopAtDepth,
        );
        let mut raw = vec![0.0; 10];
        raw[0] = 1.0;
        raw[2] = 1.0;
        let gains = gv(&raw);
        let m = score(&s, &gains).unwrap();
        let v = v_plus(
            &BrowsingModel::Rbp { p },
            &gains,
            10,
            TruncationPolicy::StopAtDepth,
        )
        .unwrap();
        assert_abs_diff_eq!(m * v * (1.0 - p), 0.328, epsilon = 1e-12);
    }

    #[test]
    fn zero_gains_score_zero_for_gain_driven_aggregations() {
        let gains = gv(&[0.0; 5]);
        for agg in [
            Aggregation::Erg,
            Aggregation::Etg,
            Aggregation::Avg,
            Aggregation::Max,
            Aggregation::Fin,
            Aggregation::Pe { beta: 0.5 },
        ] {
            let s = spec(
                BrowsingModel::Rbp { p: 0.5 },
                agg,
                5,
                TruncationPolicy::StopAtDepth,
            );
            assert_eq!(score(&s, &gains).unwrap(), 0.0, "{agg:?}");
        }
    }

    #[test]
    fn score_requires_matching_depth() {
        let s = spec(
            BrowsingModel::Ap,
            Aggregation::Erg,
            4,
            TruncationPolicy::StopAtDepth,
        );
        assert!(score(&s, &gv(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn constant_score_cells_are_rejected() {
        for model in [
            BrowsingModel::Precision { k: 10 },
            BrowsingModel::Dcg { k: 10 },
            BrowsingModel::Rbp { p: 0.8 },
        ] {
            let err = MetricSpec::new(
                model,
                Aggregation::Err,
                10,
                TruncationPolicy::StopAtDepth,
                GainScheme::Linear,
            )
            .unwrap_err();
            assert!(err.to_string().contains("rejected"), "{err}");
        }
        for model in [
            BrowsingModel::Inst { t: 2.25 },
            BrowsingModel::Ap,
            BrowsingModel::Err,
        ] {
            assert!(MetricSpec::new(
                model,
                Aggregation::Err,
                10,
                TruncationPolicy::StopAtDepth,
                GainScheme::Linear,
            )
            .is_ok());
        }
    }

    #[test]
    fn grid_yields_thirty_nine_cells() {
        let models = [
            BrowsingModel::Precision { k: 10 },
            BrowsingModel::Dcg { k: 10 },
            BrowsingModel::Rbp { p: 0.8 },
            BrowsingModel::Inst { t: 2.25 },
            BrowsingModel::Ap,
            BrowsingModel::Err,
        ];
        let grid = combination_grid(
            &models,
            10,
            TruncationPolicy::StopAtDepth,
            GainScheme::Linear,
        )
        .unwrap();
        assert_eq!(grid.len(), 39);
        assert_eq!(grid.iter().filter(|s| s.is_canonical()).count(), 6);
    }

    #[test]
    fn canonical_cells() {
        assert!(spec(
            BrowsingModel::Rbp { p: 0.8 },
            Aggregation::Erg,
            10,
            TruncationPolicy::StopAtDepth
        )
        .is_canonical());
        assert!(spec(
            BrowsingModel::Err,
            Aggregation::Err,
            10,
            TruncationPolicy::StopAtDepth
        )
        .is_canonical());
        assert!(!spec(
            BrowsingModel::Err,
            Aggregation::Erg,
            10,
            TruncationPolicy::StopAtDepth
        )
        .is_canonical());
    }

    #[test]
    fn labels_round_trip_through_the_parser() {
        let cases = [
            "precision@10+erg",
            "dcg@5+etg",
            "rbp@0.8+avg",
            "inst@2.25+max",
            "ap+fin",
            "ap+pe@0.5",
            "err+err",
            "inst@2.5+pe@0.25",
        ];
        for text in cases {
            let parsed =
                MetricSpec::parse(text, 10, TruncationPolicy::StopAtDepth, GainScheme::Linear)
                    .unwrap();
            let relabeled = MetricSpec::parse(
                &parsed.label(),
                10,
                TruncationPolicy::StopAtDepth,
                GainScheme::Linear,
            )
            .unwrap();
            assert_eq!(parsed, relabeled, "{text}");
        }
    }

    #[test]
    fn parser_defaults_pe_beta() {
        let parsed = MetricSpec::parse(
            "ap+pe",
            10,
            TruncationPolicy::StopAtDepth,
            GainScheme::Linear,
        )
        .unwrap();
        assert_eq!(parsed.agg(), &Aggregation::Pe { beta: 0.5 });
        assert_eq!(parsed.label(), "ap+pe@0.5");
    }

    #[test]
    fn parser_rejects_malformed_specs() {
        let bad = [
            "rbp@0.8",         // missing aggregation
            "rbp@0.8+erg+etg", // too many parts
            "+erg",            // empty model
            "rbp+erg",         // missing required parameter
            "rbp@2+erg",       // parameter out of range
            "rbp@x+erg",       // non-numeric parameter
            "ap@3+erg",        // parameter on a parameterless model
            "rbp@0.8+err",     // rejected grid cell
            "rbp@0.8+etg@2",   // parameter on a parameterless aggregation
            "bogus@1+erg",     // unknown model
            "ap+bogus",        // unknown aggregation
            "ap+pe@1.5",       // blend weight out of range
        ];
        for text in bad {
            assert!(
                MetricSpec::parse(text, 10, TruncationPolicy::StopAtDepth, GainScheme::Linear)
                    .is_err(),
                "{text} should be rejected"
            );
        }
    }

    #[test]
    fn parse_model_handles_standalone_model_text() {
        assert_eq!(
            parse_model("rbp@0.8").unwrap(),
            BrowsingModel::Rbp { p: 0.8 }
        );
        assert!(parse_model("rbp").is_err());
        assert!(parse_model("@0.8").is_err());
    }
}
