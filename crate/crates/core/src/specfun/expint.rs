use super::gamma::EULER_GAMMA;
use super::SpecFunError;

/// Exponential integral `E1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) || x.is_nan() {
        return Err(SpecFunError::Domain {
            function: "exp_integral_e1",
            value: x,
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x <= 1.0 {
        // E1(x) = -gamma - ln x - sum_{n>=1} (-x)^n / (n n!)
        let mut sum = 0.0;
        let mut fact = 1.0;
        for n in 1..200 {
            fact *= -x / n as f64;
            let del = fact / n as f64;
            sum += del;
            if del.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        return Ok(-EULER_GAMMA - x.ln() - sum);
    }
    // modified Lentz evaluation of the continued fraction
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h * (-x).exp());
        }
    }
    Err(SpecFunError::NonConvergence {
        operation: "exp_integral_e1",
        terms: 1000,
    })
}

/// Exponential integral `Ei(x)` restricted to the negative axis, where
/// `Ei(x) = -E1(-x)`.
pub fn exp_integral_ei(x: f64) -> Result<f64, SpecFunError> {
    if !(x < 0.0) {
        return Err(SpecFunError::Domain {
            function: "exp_integral_ei",
            value: x,
        });
    }
    Ok(-exp_integral_e1(-x)?)
}
