//! Log-gamma, regularized incomplete gamma and the scaled exponential integral.

use crate::scalar::Real;

const MAX_ITER: usize = 200_000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

// B_{2k} / (2k (2k - 1))
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if x >= T::lit(10.0) {
        // Stirling series
        let inv = x.recip();
        let inv2 = inv * inv;
        let corr = STIRLING
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * inv2 + T::lit(c))
            * inv;
        return (x - T::lit(0.5)) * x.ln() - x + T::lit(0.5) * T::TAU().ln() + corr;
    }
    if x < T::lit(0.5) {
        // reflection
        return (T::PI() / (T::PI() * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::from_count(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    T::lit(0.5) * T::TAU().ln() + (z + T::lit(0.5)) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(s, x).
pub fn gamma_p<T: Real>(s: T, x: T) -> T {
    debug_assert!(s > T::zero() && x >= T::zero());
    if x <= T::zero() {
        return T::zero();
    }
    if x < s + T::one() {
        lower_series(s, x)
    } else {
        T::one() - upper_fraction(s, x)
    }
}

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x).
pub fn gamma_q<T: Real>(s: T, x: T) -> T {
    debug_assert!(s > T::zero() && x >= T::zero());
    if x <= T::zero() {
        return T::one();
    }
    if x < s + T::one() {
        T::one() - lower_series(s, x)
    } else {
        upper_fraction(s, x)
    }
}

fn prefactor<T: Real>(s: T, x: T) -> T {
    (-x + s * x.ln() - ln_gamma(s)).exp()
}

fn lower_series<T: Real>(s: T, x: T) -> T {
    let mut ap = s;
    let mut del = s.recip();
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap = ap + T::one();
        del = del * x / ap;
        sum = sum + del;
        if del.abs() < sum.abs() * T::epsilon() {
            break;
        }
    }
    (sum * prefactor(s, x)).min(T::one())
}

/// Modified Lentz evaluation of the continued fraction for Q(s, x).
fn upper_fraction<T: Real>(s: T, x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let mut b = x + T::one() - s;
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = T::from_count(i);
        let an = -fi * (fi - s);
        b = b + T::lit(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h = h * del;
        if (del - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    (h * prefactor(s, x)).min(T::one())
}

/// `e^x E1(x)` for x > 0, where E1 is the exponential integral.
///
/// `E[log(1 + P v^2)]` for unit-mean exponential `v^2` equals `exp_e1(1/P)`.
pub fn exp_e1<T: Real>(x: T) -> T {
    debug_assert!(x > T::zero());
    if x < T::one() {
        // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
        let mut term = T::one();
        let mut sum = T::zero();
        for k in 1..MAX_ITER {
            let kf = T::from_count(k);
            term = -term * x / kf;
            let add = term / kf;
            sum = sum + add;
            if add.abs() < T::epsilon() * T::lit(1e-2) {
                break;
            }
        }
        let euler = T::lit(0.577_215_664_901_532_9);
        (-euler - x.ln() - sum) * x.exp()
    } else {
        let tiny = T::min_positive_value() / T::epsilon();
        let mut b = x + T::one();
        let mut c = tiny.recip();
        let mut d = b.recip();
        let mut h = d;
        for i in 1..MAX_ITER {
            let fi = T::from_count(i);
            let an = -fi * fi;
            b = b + T::lit(2.0);
            d = (an * d + b).recip();
            c = b + an / c;
            let del = c * d;
            h = h * del;
            if (del - T::one()).abs() < T::epsilon() {
                break;
            }
        }
        h
    }
}

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x >= T::zero() {
        gamma_q(half, x * x)
    } else {
        T::one() + gamma_p(half, x * x)
    }
}
