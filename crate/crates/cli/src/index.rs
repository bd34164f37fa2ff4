//! `--index` selection with its family parameters.

use clap::Args;
use vdb_core::WeightFunction;

#[derive(Args, Clone, Debug)]
pub struct IndexArgs {
    /// sombor | gsombor | psombor | gsc | grandic | exp:<one of those>
    #[arg(long, default_value = "sombor")]
    pub index: String,
    /// Exponent for gsombor, gsc and grandic.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Order for psombor.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
}

impl IndexArgs {
    /// Builds the weight, rejecting missing or superfluous parameters.
    pub fn weight(&self) -> Result<WeightFunction, String> {
        let (exponential, name) = match self.index.strip_prefix("exp:") {
            Some(inner) => (true, inner),
            None => (false, self.index.as_str()),
        };
        let needs_alpha = matches!(name, "gsombor" | "gsc" | "grandic");
        let needs_p = name == "psombor";
        if needs_alpha != self.alpha.is_some() {
            return Err(if needs_alpha {
                format!("--index {name} requires --alpha")
            } else {
                format!("--alpha does not apply to --index {name}")
            });
        }
        if needs_p != self.p.is_some() {
            return Err(if needs_p {
                "--index psombor requires --p".to_string()
            } else {
                format!("--p does not apply to --index {name}")
            });
        }
        let alpha = self.alpha.unwrap_or_default();
        let base = match name {
            "sombor" => WeightFunction::Sombor,
            "gsombor" => WeightFunction::GeneralSombor { alpha },
            "psombor" => WeightFunction::PSombor { p: self.p.unwrap_or_default() },
            "gsc" => WeightFunction::GeneralSumConnectivity { alpha },
            "grandic" => WeightFunction::GeneralRandic { alpha },
            other => return Err(format!("unknown index {other:?}")),
        };
        let weight = if exponential {
            WeightFunction::exponential(base)
        } else {
            base
        };
        weight.validate().map_err(|e| e.to_string())?;
        Ok(weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(index: &str, alpha: Option<f64>, p: Option<f64>) -> IndexArgs {
        IndexArgs {
            index: index.to_string(),
            alpha,
            p,
        }
    }

    #[test]
    fn parses_families() {
        assert_eq!(args("sombor", None, None).weight(), Ok(WeightFunction::Sombor));
        assert_eq!(
            args("gsc", Some(0.5), None).weight(),
            Ok(WeightFunction::GeneralSumConnectivity { alpha: 0.5 })
        );
        assert_eq!(
            args("exp:psombor", None, Some(1.5)).weight(),
            Ok(WeightFunction::exponential(WeightFunction::PSombor { p: 1.5 }))
        );
    }

    #[test]
    fn rejects_bad_combinations() {
        assert!(args("sombor", Some(1.0), None).weight().is_err());
        assert!(args("gsombor", None, None).weight().is_err());
        assert!(args("psombor", Some(1.0), Some(2.0)).weight().is_err());
        assert!(args("zagreb", None, None).weight().is_err());
        assert!(args("exp:exp:sombor", None, None).weight().is_err());
        assert!(args("psombor", None, Some(0.0)).weight().is_err());
    }
}
