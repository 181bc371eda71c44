use crate::matgraph::{linear_solve, spectral_radius, Matrix, MatrixError};
use crate::SPECTRAL_TOL;

use super::{InteractionFunction, ModelError, Network};

/// The model families that reduce to `x = f(xW + ε)`, in their native
/// parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    /// `x = xW + d`.
    InputOutput { w: Matrix, final_demand: Vec<f64> },
    /// Log-output production network with labor share `alpha`; `shares` has
    /// unit column sums. Shock `ε_j = (μ_j + α log z_j) / (1 − α)`.
    Production {
        alpha: f64,
        shares: Matrix,
        mu: Vec<f64>,
        log_productivity: Vec<f64>,
    },
    /// Best reply `x_j = α_j + φ Σ_i x_i g_ij`.
    SimpleGame {
        phi: f64,
        adjacency: Matrix,
        characteristics: Vec<f64>,
    },
    /// Local complementarity `φ` with global substitutability `γ`.
    GlobalLocalGame {
        eta: f64,
        gamma: f64,
        phi: f64,
        adjacency: Matrix,
        characteristics: Vec<f64>,
    },
    /// Interbank loan-volume game.
    InterbankGame {
        theta: f64,
        base_cost: Vec<f64>,
        phi: Vec<f64>,
        adjacency: Matrix,
    },
    /// Book values with cross-holdings `w`; `holdings[h][j]` is the share of
    /// primitive asset `h` held by `j`.
    CrossHoldings {
        w: Matrix,
        prices: Vec<f64>,
        holdings: Vec<Vec<f64>>,
    },
    /// Clearing payments from nominal liabilities `δ_ij` and cash `ε ≥ 0`.
    EisenbergNoe { liabilities: Matrix, cash: Vec<f64> },
    /// Clearing with possibly negative shocks: `clamp(t, 0, p̄)`.
    GeneralizedEN {
        w: Matrix,
        cap: Vec<f64>,
        shock: Vec<f64>,
    },
    /// Clearing with proportional bankruptcy costs `α_j`.
    BankruptcyCost {
        w: Matrix,
        alpha: Vec<f64>,
        cap: Vec<f64>,
        shock: Vec<f64>,
    },
    /// Discontinuous recovery rates `α` (cash) and `β` (interbank).
    RogersVeraartNet {
        w: Matrix,
        alpha: f64,
        beta: f64,
        cap: Vec<f64>,
        shock: Vec<f64>,
    },
    /// Clearing with maturity mismatch; `net_remainder` is `B`.
    MaturityEN {
        w: Matrix,
        cap: Vec<f64>,
        net_remainder: Vec<f64>,
        shock: Vec<f64>,
    },
}

impl ModelSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ModelSpec::InputOutput { .. } => "input_output",
            ModelSpec::Production { .. } => "production",
            ModelSpec::SimpleGame { .. } => "simple_game",
            ModelSpec::GlobalLocalGame { .. } => "global_local_game",
            ModelSpec::InterbankGame { .. } => "interbank_game",
            ModelSpec::CrossHoldings { .. } => "cross_holdings",
            ModelSpec::EisenbergNoe { .. } => "eisenberg_noe",
            ModelSpec::GeneralizedEN { .. } => "generalized_en",
            ModelSpec::BankruptcyCost { .. } => "bankruptcy_cost",
            ModelSpec::RogersVeraartNet { .. } => "rogers_veraart",
            ModelSpec::MaturityEN { .. } => "maturity_en",
        }
    }
}

fn check_len(field: &str, v: &[f64], n: usize) -> Result<(), ModelError> {
    if v.len() != n {
        return Err(ModelError::dims(field, n, v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(ModelError::invalid(field, "entries must be finite"));
    }
    Ok(())
}

fn check_all(field: &str, v: &[f64], ok: impl Fn(f64) -> bool, reason: &str) -> Result<(), ModelError> {
    if v.iter().all(|&x| ok(x)) {
        Ok(())
    } else {
        Err(ModelError::invalid(field, reason))
    }
}

fn check_nonneg(field: &str, w: &Matrix) -> Result<(), ModelError> {
    if w.is_nonnegative() {
        Ok(())
    } else {
        Err(ModelError::invalid(field, "entries must be nonnegative"))
    }
}

fn check_zero_diagonal(field: &str, w: &Matrix) -> Result<(), ModelError> {
    if (0..w.n()).all(|i| w[(i, i)] == 0.0) {
        Ok(())
    } else {
        Err(ModelError::invalid(field, "diagonal must be zero"))
    }
}

fn check_positive(field: &str, x: f64) -> Result<(), ModelError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(ModelError::invalid(field, "must be positive"))
    }
}

fn caps(cap: &[f64], lower: f64) -> Result<Vec<InteractionFunction>, ModelError> {
    cap.iter()
        .map(|&p| InteractionFunction::clamped_affine(0.0, 1.0, lower, p))
        .collect()
}

/// Validates the family parameters and maps them to `(f, W, ε)`.
pub fn build_network(spec: &ModelSpec) -> Result<Network, ModelError> {
    match spec {
        ModelSpec::InputOutput { w, final_demand } => {
            check_nonneg("w", w)?;
            check_len("final_demand", final_demand, w.n())?;
            Network::new(
                w.clone(),
                vec![InteractionFunction::identity(); w.n()],
                final_demand.clone(),
            )
        }
        ModelSpec::Production {
            alpha,
            shares,
            mu,
            log_productivity,
        } => {
            let n = shares.n();
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(ModelError::invalid("alpha", "must lie in (0, 1)"));
            }
            check_nonneg("shares", shares)?;
            if !shares.col_sums().iter().all(|s| (s - 1.0).abs() <= 1e-9) {
                return Err(ModelError::invalid("shares", "columns must sum to one"));
            }
            check_len("mu", mu, n)?;
            check_len("log_productivity", log_productivity, n)?;
            let shock = mu
                .iter()
                .zip(log_productivity)
                .map(|(m, z)| (m + alpha * z) / (1.0 - alpha))
                .collect();
            Network::new(
                shares.clone(),
                vec![InteractionFunction::linear(1.0 - alpha); n],
                shock,
            )
        }
        ModelSpec::SimpleGame {
            phi,
            adjacency,
            characteristics,
        } => {
            check_positive("phi", *phi)?;
            check_zero_diagonal("adjacency", adjacency)?;
            check_len("characteristics", characteristics, adjacency.n())?;
            check_all("characteristics", characteristics, |a| a > 0.0, "must be positive")?;
            Network::new(
                adjacency.clone(),
                vec![InteractionFunction::linear(*phi); adjacency.n()],
                characteristics.iter().map(|a| a / phi).collect(),
            )
        }
        ModelSpec::GlobalLocalGame {
            eta,
            gamma,
            phi,
            adjacency,
            characteristics,
        } => {
            check_positive("eta", *eta)?;
            check_positive("phi", *phi)?;
            if !(*gamma >= 0.0) || !gamma.is_finite() {
                return Err(ModelError::invalid("gamma", "must be nonnegative"));
            }
            check_zero_diagonal("adjacency", adjacency)?;
            let n = adjacency.n();
            check_len("characteristics", characteristics, n)?;
            check_all("characteristics", characteristics, |a| a > 0.0, "must be positive")?;
            // the global term Σ_i x_i includes agent j itself
            let w = Matrix::from_fn(n, |i, j| adjacency[(i, j)] - gamma / phi);
            Network::new(
                w,
                vec![InteractionFunction::linear(phi / eta); n],
                characteristics.iter().map(|a| a / phi).collect(),
            )
        }
        ModelSpec::InterbankGame {
            theta,
            base_cost,
            phi,
            adjacency,
        } => {
            let n = adjacency.n();
            check_positive("theta", *theta)?;
            check_len("base_cost", base_cost, n)?;
            check_len("phi", phi, n)?;
            check_all("base_cost", base_cost, |c| c > 0.0, "must be positive")?;
            check_all("phi", phi, |p| p > 0.0, "must be positive")?;
            check_zero_diagonal("adjacency", adjacency)?;
            let w = Matrix::from_fn(n, |i, j| adjacency[(i, j)] - 1.0);
            Network::new(
                w,
                phi.iter().map(|&p| InteractionFunction::linear(p)).collect(),
                base_cost
                    .iter()
                    .zip(phi)
                    .map(|(c, p)| (theta - c) / p)
                    .collect(),
            )
        }
        ModelSpec::CrossHoldings {
            w,
            prices,
            holdings,
        } => {
            let n = w.n();
            check_nonneg("w", w)?;
            check_zero_diagonal("w", w)?;
            if !w.row_sums().iter().all(|&s| s < 1.0) {
                return Err(ModelError::invalid(
                    "w",
                    "outside investors must hold a positive share of every organization",
                ));
            }
            if holdings.len() != prices.len() {
                return Err(ModelError::dims("holdings", prices.len(), holdings.len()));
            }
            check_all("prices", prices, |p| p >= 0.0 && p.is_finite(), "must be nonnegative")?;
            let mut shock = vec![0.0; n];
            for (h, row) in holdings.iter().enumerate() {
                check_len("holdings", row, n)?;
                check_all("holdings", row, |b| b >= 0.0, "must be nonnegative")?;
                for (s, b) in shock.iter_mut().zip(row) {
                    *s += prices[h] * b;
                }
            }
            Network::new(w.clone(), vec![InteractionFunction::identity(); n], shock)
        }
        ModelSpec::EisenbergNoe { liabilities, cash } => {
            let n = liabilities.n();
            check_nonneg("liabilities", liabilities)?;
            check_len("cash", cash, n)?;
            check_all("cash", cash, |c| c >= 0.0, "must be nonnegative")?;
            let pbar = liabilities.row_sums();
            let w = Matrix::from_fn(n, |i, j| {
                if pbar[i] > 0.0 {
                    liabilities[(i, j)] / pbar[i]
                } else {
                    0.0
                }
            });
            // payments are never negative because inputs are not; the lower
            // clamp at zero keeps the lattice bounded
            let functions = pbar
                .iter()
                .map(|&p| {
                    if p > 0.0 {
                        InteractionFunction::clamped_affine(0.0, 1.0, 0.0, p)
                    } else {
                        InteractionFunction::clamped_affine(0.0, 0.0, 0.0, f64::INFINITY)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Network::new(w, functions, cash.clone())
        }
        ModelSpec::GeneralizedEN { w, cap, shock } => {
            check_nonneg("w", w)?;
            check_len("cap", cap, w.n())?;
            check_all("cap", cap, |p| p > 0.0, "must be positive")?;
            Network::new(w.clone(), caps(cap, 0.0)?, shock.clone())
        }
        ModelSpec::BankruptcyCost {
            w,
            alpha,
            cap,
            shock,
        } => {
            let n = w.n();
            check_nonneg("w", w)?;
            check_len("alpha", alpha, n)?;
            check_len("cap", cap, n)?;
            check_all("alpha", alpha, |a| a >= 0.0, "must be nonnegative")?;
            check_all("cap", cap, |p| p > 0.0, "must be positive")?;
            let functions = alpha
                .iter()
                .zip(cap)
                .map(|(&a, &p)| InteractionFunction::clamped_affine(-a * p, 1.0 + a, 0.0, p))
                .collect::<Result<Vec<_>, _>>()?;
            Network::new(w.clone(), functions, shock.clone())
        }
        ModelSpec::RogersVeraartNet {
            w,
            alpha,
            beta,
            cap,
            shock,
        } => {
            let n = w.n();
            check_nonneg("w", w)?;
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(ModelError::invalid("alpha", "must lie in (0, 1)"));
            }
            check_len("cap", cap, n)?;
            check_len("shock", shock, n)?;
            check_all("cap", cap, |p| p > 0.0, "must be positive")?;
            check_all("shock", shock, |e| e >= 0.0, "must be nonnegative")?;
            let functions = cap
                .iter()
                .zip(shock)
                .map(|(&p, &e)| {
                    InteractionFunction::rogers_veraart(*beta, p + (alpha / beta - 1.0) * e, p)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Network::new(
                w.clone(),
                functions,
                shock.iter().map(|e| alpha * e / beta).collect(),
            )
        }
        ModelSpec::MaturityEN {
            w,
            cap,
            net_remainder,
            shock,
        } => {
            let n = w.n();
            check_nonneg("w", w)?;
            if !w.row_sums().iter().all(|&s| s <= 1.0 + 1e-12) {
                return Err(ModelError::invalid("w", "rows must sum to at most one"));
            }
            check_len("cap", cap, n)?;
            check_len("net_remainder", net_remainder, n)?;
            check_all("cap", cap, |p| p > 0.0, "must be positive")?;
            let functions = cap
                .iter()
                .zip(net_remainder)
                .map(|(&p, &b)| {
                    let offset = if b >= 0.0 { 0.0 } else { b };
                    InteractionFunction::clamped_affine(offset, 1.0, 0.0, p)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Network::new(w.clone(), functions, shock.clone())
        }
    }
}

/// Closed-form equilibrium of the linear families.
///
/// Every supported family has `f_j(t) = g_j·t`, so the equilibrium solves
/// `x(I − W diag(g)) = ε diag(g)`. Families whose stated existence condition
/// is spectral (`r(W diag(g)) < 1` for nonnegative `W`) are checked against
/// it; the game families with signed `W` only need invertibility.
pub fn closed_form_equilibrium(spec: &ModelSpec) -> Result<Vec<f64>, ModelError> {
    let spectral = match spec {
        ModelSpec::InputOutput { .. }
        | ModelSpec::Production { .. }
        | ModelSpec::SimpleGame { .. }
        | ModelSpec::CrossHoldings { .. } => true,
        ModelSpec::GlobalLocalGame { .. } | ModelSpec::InterbankGame { .. } => false,
        _ => return Err(ModelError::Unsupported),
    };
    let net = build_network(spec)?;
    let gains = net.lipschitz().ok_or(ModelError::Unsupported)?;
    let wg = net.w().scale_columns(&gains);
    if spectral {
        let r = spectral_radius(&wg.abs(), 1e-12, 200)?;
        if r >= 1.0 - SPECTRAL_TOL {
            return Err(ModelError::NotInvertible(format!(
                "spectral radius {r} is not below one"
            )));
        }
    }
    let a = Matrix::identity(net.n()).sub(&wg);
    let b: Vec<f64> = net.shock().iter().zip(&gains).map(|(e, g)| e * g).collect();
    linear_solve(&a, &b).map_err(|e| match e {
        MatrixError::Singular { pivot } => {
            ModelError::NotInvertible(format!("singular at pivot {pivot}"))
        }
        other => other.into(),
    })
}
