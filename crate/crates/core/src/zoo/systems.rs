use crate::gpt::{Effect, GptError, GptSystem, State};
use crate::numerics::{ratio, Ball, Scalar, DEFAULT_PRECISION_BITS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZooError {
    #[error("{model} needs {requirement}, got {got}")]
    Parameter { model: &'static str, requirement: &'static str, got: usize },
    #[error("cannot settle the sign of the {0} at the working precision")]
    Indeterminate(&'static str),
    #[error("trigonometric and pairing forms disagree for n = {n}")]
    Disagreement { n: usize },
    #[error(transparent)]
    System(#[from] GptError),
}

fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()
}

/// The `n`-outcome classical system: a simplex with vertex states.
pub fn classical_system(n: usize) -> Result<GptSystem, ZooError> {
    if n < 2 {
        return Err(ZooError::Parameter { model: "classical", requirement: "n ≥ 2", got: n });
    }
    let states = (0..n).map(|i| State(unit_vector(n, i))).collect();
    let unit = Effect(vec![Scalar::one(); n]);
    let mut effects: Vec<Effect> = (0..n).map(|i| Effect(unit_vector(n, i))).collect();
    effects.push(unit.clone());
    Ok(GptSystem::new(format!("classical({n})"), states, effects, unit)?)
}

/// The square bit. Pure state `φ_y` is pure state index `y − 1` and pure
/// effect `a_y` is effect index `y − 1`; effect index 4 is the unit.
///
/// Coordinates are the usual ones with the first two state components
/// divided by `r = 2^{1/4}` and the first two effect components multiplied
/// by `r`, which leaves every pairing unchanged and makes all entries
/// rational.
pub fn square_bit() -> GptSystem {
    let s = |x: i64, y: i64| State(vec![Scalar::from_int(x), Scalar::from_int(y), Scalar::one()]);
    let half = |x: i64, y: i64| Effect(vec![Scalar::ratio(x, 2), Scalar::ratio(y, 2), Scalar::ratio(1, 2)]);
    let states = vec![s(0, 1), s(-1, 0), s(0, -1), s(1, 0)];
    let unit = Effect(vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
    let effects = vec![half(1, 1), half(-1, 1), half(-1, -1), half(1, -1), unit.clone()];
    GptSystem::new("square bit", states, effects, unit).expect("square bit is consistent")
}

/// `cos(π/n)` in closed form when it lies in a real quadratic field.
fn exact_cos_pi_over(n: usize) -> Option<Scalar> {
    match n {
        3 => Some(Scalar::ratio(1, 2)),
        4 => Some(Scalar::quad(ratio(0, 1), ratio(1, 2), 2)),
        5 => Some(Scalar::quad(ratio(1, 4), ratio(1, 4), 5)),
        6 => Some(Scalar::quad(ratio(0, 1), ratio(1, 2), 3)),
        _ => None,
    }
}

/// Whether [`polygon_system`] builds `n` with exact coordinates.
pub fn polygon_is_exact(n: usize) -> bool {
    exact_cos_pi_over(n).is_some()
}

/// The regular polygon with `n` vertices at the default precision.
pub fn polygon_system(n: usize) -> Result<GptSystem, ZooError> {
    polygon_system_with_precision(n, DEFAULT_PRECISION_BITS)
}

/// The regular `n`-gon. Pure state `φ_y` is index `y` and pure effect `a_y`
/// is effect index `y` for `y = 0..n`; effect index `n` is the unit.
///
/// Relative to the textbook vectors, state components are divided by `r_n`
/// and the second state component by `sin(2π/n)`, with the inverse scaling
/// on effects. Every entry is then a rational function of `cos(π/n)`, so
/// `n ∈ {3, 4, 5, 6}` are exact and other `n` use balls of `bits` bits.
pub fn polygon_system_with_precision(n: usize, bits: u32) -> Result<GptSystem, ZooError> {
    if n < 3 {
        return Err(ZooError::Parameter { model: "polygon", requirement: "n ≥ 3", got: n });
    }
    let two_n = 2 * n as i64;
    let cos_table: Vec<Scalar> = match exact_cos_pi_over(n) {
        Some(c) => {
            let mut t = vec![Scalar::one(), c.clone()];
            for m in 2..two_n as usize {
                let next = Scalar::from_int(2) * &c * &t[m - 1] - &t[m - 2];
                t.push(next);
            }
            t
        }
        None => (0..two_n).map(|m| Scalar::Approx(Ball::cos_pi_frac(m, n as i64, bits))).collect(),
    };
    let cos_pi = |m: i64| cos_table[m.rem_euclid(two_n) as usize].clone();
    let c = cos_pi(1);
    let t = cos_pi(2);
    let two = Scalar::from_int(2);

    // sin(2πy/n)/sin(2π/n) = U_{y−1}(cos 2π/n)
    let mut sin_ratio = vec![Scalar::zero(), Scalar::one()];
    for y in 2..n {
        let next = &two * &t * &sin_ratio[y - 1] - &sin_ratio[y - 2];
        sin_ratio.push(next);
    }
    let states = (0..n).map(|y| State(vec![cos_pi(2 * y as i64), sin_ratio[y].clone(), Scalar::one()])).collect();

    // sin(Mπ/n)·sin(2π/n)
    let sin_product = |m: i64| (cos_pi(m - 2) - cos_pi(m + 2)) / &two;
    let effects: Vec<Effect> = (0..n as i64)
        .map(|y| {
            if n.is_multiple_of(2) {
                let m = 2 * y - 1;
                let half = Scalar::ratio(1, 2);
                Effect(vec![&half * &(cos_pi(m) / &c), &half * &(sin_product(m) / &c), half.clone()])
            } else {
                let m = 2 * y;
                let den = Scalar::one() + &c;
                Effect(vec![cos_pi(m) / &den, sin_product(m) / &den, &c / &den])
            }
        })
        .collect();
    let unit = Effect(vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
    let mut generators = effects;
    generators.push(unit.clone());
    Ok(GptSystem::new(format!("polygon({n})"), states, generators, unit)?)
}

/// `r_n² = 1/cos(π/n)`.
pub fn polygon_r_squared(n: usize, bits: u32) -> Scalar {
    match exact_cos_pi_over(n) {
        Some(c) => Scalar::one() / c,
        None => Scalar::one() / Scalar::Approx(Ball::cos_pi_frac(1, n as i64, bits)),
    }
}
