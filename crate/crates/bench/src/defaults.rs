//! Default parameters as `key=value # source` lines.

use graal_core::solver::{AgraalParams, GammaSchedule, SolverConfig};

use crate::experiment::DEFAULT_EDGE_PROB;

pub fn defaults_text() -> String {
    let c = SolverConfig::default();
    let ag = AgraalParams::default();
    let g = GammaSchedule::MATRIX_GAME;
    let lr = GammaSchedule::LOGREG;
    let wide = GammaSchedule::LOGREG_WIDE;
    let lines = [
        format!("eta0={} # step-size rule, decrease threshold", c.eta0),
        format!("eta1={} # step-size rule, decrease factor", c.eta1),
        format!("gamma.r={} # growth sequence, matrix games", g.r),
        format!("gamma.s={} # growth sequence, matrix games", g.s),
        format!("gamma.t={} # growth sequence, matrix games", g.t),
        format!("gamma.logreg.r={} # growth sequence, logistic regression (ijcnn1, a9a)", lr.r),
        format!("gamma.logreg.s={} # growth sequence, logistic regression (ijcnn1, a9a)", lr.s),
        format!("gamma.logreg.t={} # growth sequence, logistic regression (ijcnn1, a9a)", lr.t),
        format!("gamma.logreg_wide.r={} # growth sequence, logistic regression (duke)", wide.r),
        format!("gamma.logreg_wide.s={} # growth sequence, logistic regression (duke)", wide.s),
        format!("gamma.logreg_wide.t={} # growth sequence, logistic regression (duke)", wide.t),
        "lambda0=phi/2*|w1-w0|/|A(w1)-A(w0)| # initial step, modified method".to_string(),
        "bgraal.lambda=phi/(2L) # fixed step".to_string(),
        format!("agraal.phi={} # adaptive baseline", ag.phi),
        format!("agraal.lambda_max={:e} # adaptive baseline", ag.lambda_max),
        format!("agraal.rho={} # adaptive baseline, 1/phi + 1/phi^2", ag.rho()),
        format!("tol={:e} # stopping residual", c.tol),
        format!("max_iter={} # iteration cap", c.max_iter),
        format!("seed={} # graph and start perturbation", c.seed),
        format!("perturbation={:e} # w1 = w0 + perturbation * uniform noise", c.perturbation),
        format!("edge_prob={DEFAULT_EDGE_PROB} # random graph density"),
        "logreg.beta=0.005*|C^T c|_inf # l1 weight".to_string(),
    ];
    let mut s = lines.join("\n");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn required_keys_present() {
        let t = defaults_text();
        for line in t.lines() {
            assert!(line.contains('=') && line.contains(" # "), "{line}");
        }
        let keys: Vec<&str> = t.lines().collect();
        assert!(keys.iter().any(|l| l.starts_with("eta1=0.75 ")));
        assert!(keys.iter().any(|l| l.starts_with("eta0=0.8 ")));
        assert!(keys.iter().any(|l| l.starts_with("gamma.t=1.1 ")));
        assert!(keys.iter().any(|l| l.starts_with("gamma.r=0.0007 ")));
        assert!(keys.iter().any(|l| l.starts_with("agraal.lambda_max=1e6 ")));
        assert!(keys.iter().any(|l| l.starts_with("agraal.phi=1.5 ")));
    }
}
