//! The NetworkDocument JSON format.
//!
//! A document either lists a network explicitly (`w`, `shock`, `functions`)
//! or names a model family with its native parameters (`model`). Clamp
//! bounds written as `null` mean unbounded on that side.

use std::path::Path;

use netequil::netmodel::{build_network, ModelSpec};
use netequil::{InteractionFunction, Matrix, Network};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<FunctionDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDoc>,
}

fn zero() -> f64 {
    0.0
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDoc {
    /// `min(max(offset + gain·t, lower), upper)`.
    ClampedAffine {
        #[serde(default = "zero")]
        offset: f64,
        #[serde(default = "one")]
        gain: f64,
        lower: Option<f64>,
        upper: Option<f64>,
    },
    RogersVeraart { beta: f64, threshold: f64, cap: f64 },
}

type Rows = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelDoc {
    InputOutput { w: Rows, final_demand: Vec<f64> },
    Production { alpha: f64, shares: Rows, mu: Vec<f64>, log_productivity: Vec<f64> },
    SimpleGame { phi: f64, adjacency: Rows, characteristics: Vec<f64> },
    GlobalLocalGame { eta: f64, gamma: f64, phi: f64, adjacency: Rows, characteristics: Vec<f64> },
    InterbankGame { theta: f64, base_cost: Vec<f64>, phi: Vec<f64>, adjacency: Rows },
    CrossHoldings { w: Rows, prices: Vec<f64>, holdings: Rows },
    EisenbergNoe { liabilities: Rows, cash: Vec<f64> },
    GeneralizedEn { w: Rows, cap: Vec<f64>, shock: Vec<f64> },
    BankruptcyCost { w: Rows, alpha: Vec<f64>, cap: Vec<f64>, shock: Vec<f64> },
    RogersVeraart { w: Rows, alpha: f64, beta: f64, cap: Vec<f64>, shock: Vec<f64> },
    MaturityEn { w: Rows, cap: Vec<f64>, net_remainder: Vec<f64>, shock: Vec<f64> },
}

fn matrix(field: &str, rows: &Rows) -> Result<Matrix, CliError> {
    Matrix::from_rows(rows).map_err(|e| CliError::Usage(format!("`{field}`: {e}")))
}

impl ModelDoc {
    pub fn to_spec(&self) -> Result<ModelSpec, CliError> {
        Ok(match self {
            ModelDoc::InputOutput { w, final_demand } => ModelSpec::InputOutput {
                w: matrix("w", w)?,
                final_demand: final_demand.clone(),
            },
            ModelDoc::Production { alpha, shares, mu, log_productivity } => ModelSpec::Production {
                alpha: *alpha,
                shares: matrix("shares", shares)?,
                mu: mu.clone(),
                log_productivity: log_productivity.clone(),
            },
            ModelDoc::SimpleGame { phi, adjacency, characteristics } => ModelSpec::SimpleGame {
                phi: *phi,
                adjacency: matrix("adjacency", adjacency)?,
                characteristics: characteristics.clone(),
            },
            ModelDoc::GlobalLocalGame { eta, gamma, phi, adjacency, characteristics } => {
                ModelSpec::GlobalLocalGame {
                    eta: *eta,
                    gamma: *gamma,
                    phi: *phi,
                    adjacency: matrix("adjacency", adjacency)?,
                    characteristics: characteristics.clone(),
                }
            }
            ModelDoc::InterbankGame { theta, base_cost, phi, adjacency } => ModelSpec::InterbankGame {
                theta: *theta,
                base_cost: base_cost.clone(),
                phi: phi.clone(),
                adjacency: matrix("adjacency", adjacency)?,
            },
            ModelDoc::CrossHoldings { w, prices, holdings } => ModelSpec::CrossHoldings {
                w: matrix("w", w)?,
                prices: prices.clone(),
                holdings: holdings.clone(),
            },
            ModelDoc::EisenbergNoe { liabilities, cash } => ModelSpec::EisenbergNoe {
                liabilities: matrix("liabilities", liabilities)?,
                cash: cash.clone(),
            },
            ModelDoc::GeneralizedEn { w, cap, shock } => ModelSpec::GeneralizedEN {
                w: matrix("w", w)?,
                cap: cap.clone(),
                shock: shock.clone(),
            },
            ModelDoc::BankruptcyCost { w, alpha, cap, shock } => ModelSpec::BankruptcyCost {
                w: matrix("w", w)?,
                alpha: alpha.clone(),
                cap: cap.clone(),
                shock: shock.clone(),
            },
            ModelDoc::RogersVeraart { w, alpha, beta, cap, shock } => ModelSpec::RogersVeraartNet {
                w: matrix("w", w)?,
                alpha: *alpha,
                beta: *beta,
                cap: cap.clone(),
                shock: shock.clone(),
            },
            ModelDoc::MaturityEn { w, cap, net_remainder, shock } => ModelSpec::MaturityEN {
                w: matrix("w", w)?,
                cap: cap.clone(),
                net_remainder: net_remainder.clone(),
                shock: shock.clone(),
            },
        })
    }
}

impl FunctionDoc {
    fn build(&self) -> Result<InteractionFunction, CliError> {
        let f = match *self {
            FunctionDoc::ClampedAffine { offset, gain, lower, upper } => InteractionFunction::clamped_affine(
                offset,
                gain,
                lower.unwrap_or(f64::NEG_INFINITY),
                upper.unwrap_or(f64::INFINITY),
            ),
            FunctionDoc::RogersVeraart { beta, threshold, cap } => {
                InteractionFunction::rogers_veraart(beta, threshold, cap)
            }
        };
        f.map_err(|e| CliError::Usage(e.to_string()))
    }

    fn from_function(f: &InteractionFunction) -> Self {
        let finite = |v: f64| v.is_finite().then_some(v);
        match *f {
            InteractionFunction::ClampedAffine { offset, gain, lower, upper } => FunctionDoc::ClampedAffine {
                offset,
                gain,
                lower: finite(lower),
                upper: finite(upper),
            },
            InteractionFunction::RogersVeraart { beta, threshold, cap } => {
                FunctionDoc::RogersVeraart { beta, threshold, cap }
            }
        }
    }
}

impl NetworkDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: NetworkDocument =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid document: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Explicit form of a network.
    pub fn from_network(net: &Network) -> Self {
        NetworkDocument {
            schema_version: SCHEMA_VERSION.into(),
            w: Some(net.w().to_rows()),
            shock: Some(net.shock().to_vec()),
            functions: Some(net.functions().iter().map(FunctionDoc::from_function).collect()),
            model: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn network(&self) -> Result<Network, CliError> {
        match (&self.w, &self.shock, &self.functions, &self.model) {
            (Some(w), Some(shock), Some(functions), None) => {
                let w = matrix("w", w)?;
                let functions = functions.iter().map(FunctionDoc::build).collect::<Result<_, _>>()?;
                Network::new(w, functions, shock.clone()).map_err(|e| CliError::Usage(e.to_string()))
            }
            (None, None, None, Some(model)) => {
                build_network(&model.to_spec()?).map_err(|e| CliError::Usage(e.to_string()))
            }
            _ => Err(CliError::Usage(
                "a document needs either all of `w`, `shock`, `functions` or only `model`".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_document() {
        let doc = NetworkDocument::parse(
            r#"{"schema_version": "1", "w": [[0, 1], [1, 0]], "shock": [1, -1],
                "functions": [{"kind": "clamped_affine", "lower": -2, "upper": 2},
                              {"kind": "clamped_affine", "lower": -2, "upper": null}]}"#,
        )
        .unwrap();
        let net = doc.network().unwrap();
        assert_eq!(net.apply(&[5.0, 5.0]), vec![2.0, 4.0]);
    }

    #[test]
    fn model_document() {
        let doc = NetworkDocument::parse(
            r#"{"schema_version": "1",
                "model": {"family": "input_output", "w": [[0.5]], "final_demand": [1]}}"#,
        )
        .unwrap();
        assert_eq!(doc.network().unwrap().apply(&[2.0]), vec![2.0]);
    }

    #[test]
    fn rejects_bad_documents() {
        for text in [
            r#"{"schema_version": "2", "model": {"family": "input_output", "w": [[0.5]], "final_demand": [1]}}"#,
            r#"{"schema_version": "1"}"#,
            r#"{"schema_version": "1", "w": [[0]], "shock": [1], "functions": [{"kind": "clamped_affine", "lower": null, "upper": null}],
                "model": {"family": "input_output", "w": [[0.5]], "final_demand": [1]}}"#,
            r#"{"schema_version": "1", "w": [[0]], "shock": [1e999], "functions": [{"kind": "clamped_affine", "lower": null, "upper": null}]}"#,
            r#"{"schema_version": "1", "w": [[0]], "shock": [NaN], "functions": []}"#,
            r#"{"schema_version": "1", "w": [[0]], "shock": [1], "functions": [], "extra": 1}"#,
        ] {
            let res = NetworkDocument::parse(text).and_then(|d| d.network());
            assert!(matches!(res, Err(CliError::Usage(_))), "{text}");
        }
    }

    #[test]
    fn explicit_round_trip_is_exact() {
        let d = netequil::demos::demo("seven-node").unwrap();
        let doc = NetworkDocument::from_network(&d.network);
        let back = NetworkDocument::parse(&doc.to_json()).unwrap().network().unwrap();
        assert_eq!(back, d.network);
    }
}
