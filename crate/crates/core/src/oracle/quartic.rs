//! Roots of complex cubics and quartics in closed form.
//!
//! Quartics are solved by Ferrari's method through the resolvent cubic,
//! followed by guarded Newton steps on the original polynomial. The closed
//! form loses absolute accuracy on roots much smaller than the largest one;
//! Newton restores it as long as the residual keeps shrinking.
//!
//! Close pairs of real roots can come out of the closed form as a complex
//! pair, from which Newton cannot recover; [`refine_real_roots`] handles
//! quartics whose roots are known to be real.

use num_complex::Complex64;

type C = Complex64;

const NEWTON_STEPS: usize = 60;
const WEIERSTRASS_STEPS: usize = 100;

/// Roots of the monic cubic `x^3 + a x^2 + b x + c`.
pub fn solve_cubic(a: C, b: C, c: C) -> [C; 3] {
    // x = u - a/3  ->  u^3 + p u + q = 0
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let omega = C::new(-0.5, 0.75f64.sqrt());

    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let w1 = -q / 2.0 + disc;
    let w2 = -q / 2.0 - disc;
    let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
    if w.norm() == 0.0 {
        // p = q = 0: triple root
        return [-shift; 3];
    }
    let u0 = w.cbrt();
    let mut roots = [C::new(0.0, 0.0); 3];
    let mut rot = C::new(1.0, 0.0);
    for root in roots.iter_mut() {
        let u = u0 * rot;
        *root = u - p / (3.0 * u) - shift;
        rot *= omega;
    }
    roots
}

/// Roots of the monic quartic `x^4 + a x^3 + b x^2 + c x + d`.
pub fn solve_quartic(a: C, b: C, c: C, d: C) -> [C; 4] {
    // x = y - a/4  ->  y^4 + p y^2 + q y + r = 0
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = c - a * b / 2.0 + a2 * a / 8.0;
    let r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

    let scale = 1.0 + p.norm() + q.norm().sqrt() + r.norm().sqrt();
    let mut roots = if q.norm() <= 1e-14 * scale * scale * scale {
        // biquadratic
        let s = (p * p - 4.0 * r).sqrt();
        let z1 = (-p + s) / 2.0;
        let z2 = (-p - s) / 2.0;
        [z1.sqrt(), -z1.sqrt(), z2.sqrt(), -z2.sqrt()]
    } else {
        // resolvent: 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0
        let cubic = solve_cubic(p, p * p / 4.0 - r, -q * q / 8.0);
        let m = cubic.into_iter().max_by(|x, y| x.norm().total_cmp(&y.norm())).expect("cubic has three roots");
        let s = (2.0 * m).sqrt();
        let t = q / (2.0 * s);
        let half = p / 2.0 + m;
        // y^2 - s y + (half + t) = 0 and y^2 + s y + (half - t) = 0
        let d1 = (s * s - 4.0 * (half + t)).sqrt();
        let d2 = (s * s - 4.0 * (half - t)).sqrt();
        [(s + d1) / 2.0, (s - d1) / 2.0, (-s + d2) / 2.0, (-s - d2) / 2.0]
    };
    for y in roots.iter_mut() {
        *y -= shift;
    }
    for x in roots.iter_mut() {
        *x = polish(*x, [a, b, c, d]);
    }
    roots
}

/// Newton refinement that only accepts steps reducing the residual.
fn polish(mut x: C, [a, b, c, d]: [C; 4]) -> C {
    let eval = |x: C| {
        let f = (((x + a) * x + b) * x + c) * x + d;
        let df = ((4.0 * x + 3.0 * a) * x + 2.0 * b) * x + c;
        (f, df)
    };
    let (mut f, mut df) = eval(x);
    for _ in 0..NEWTON_STEPS {
        if f.norm() == 0.0 || df.norm() == 0.0 {
            break;
        }
        let candidate = x - f / df;
        let (fc, dfc) = eval(candidate);
        if fc.norm() >= f.norm() {
            break;
        }
        x = candidate;
        f = fc;
        df = dfc;
    }
    x
}

/// Simultaneous (Weierstrass) refinement of the four roots of a real monic
/// quartic known to have only real roots. Updating all roots together keeps
/// two approximations from converging to the same root, which independent
/// Newton runs cannot guarantee for close pairs.
pub fn refine_real_roots(start: [f64; 4], [a, b, c, d]: [f64; 4]) -> [f64; 4] {
    let p = |x: f64| (((x + a) * x + b) * x + c) * x + d;
    let mut z = start;
    for _ in 0..WEIERSTRASS_STEPS {
        let scale = z.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut next = z;
        let mut largest_step = 0.0f64;
        for i in 0..4 {
            let denom: f64 = (0..4).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            if denom == 0.0 {
                continue;
            }
            let step = p(z[i]) / denom;
            next[i] = z[i] - step;
            largest_step = largest_step.max(step.abs());
        }
        if !next.iter().all(|v| v.is_finite()) {
            break;
        }
        z = next;
        if largest_step <= 4.0 * f64::EPSILON * scale {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn coefficients(roots: [C; 4]) -> [C; 4] {
        let [r1, r2, r3, r4] = roots;
        let a = -(r1 + r2 + r3 + r4);
        let b = r1 * r2 + r1 * r3 + r1 * r4 + r2 * r3 + r2 * r4 + r3 * r4;
        let cc = -(r1 * r2 * r3 + r1 * r2 * r4 + r1 * r3 * r4 + r2 * r3 * r4);
        let d = r1 * r2 * r3 * r4;
        [a, b, cc, d]
    }

    #[test]
    fn real_refinement_separates_close_pair() {
        // roots 1e-8 and 1.03e-8 next to 0.24 and 0.25, started from the
        // kind of complex pair the closed form returns
        let r = [0.24, 0.25, 1e-8, 1.03e-8];
        let coeffs = coefficients(r.map(|v| c(v, 0.0))).map(|z| z.re);
        let found = refine_real_roots([0.2400001, 0.2499999, 1.015e-8 - 1e-11, 1.015e-8 + 1e-11], coeffs);
        // rounding in the coefficients alone moves the small roots by ~1e-14
        for (f, e) in found.iter().zip(r) {
            let tol = if e < 1e-3 { 1e-13 } else { 1e-14 };
            assert!((f - e).abs() < tol, "{found:?}");
        }
    }

    fn assert_same_roots(found: [C; 4], expected: [C; 4], tol: f64) {
        let mut used = [false; 4];
        for e in expected {
            let (idx, dist) = found
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, f)| (i, (f - e).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            assert!(dist < tol, "root {e} not found in {found:?} (closest {dist:e})");
            used[idx] = true;
        }
    }

    #[test]
    fn cubic_roots() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let r = solve_cubic(c(0.0, 0.0), c(-7.0, 0.0), c(6.0, 0.0));
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 3.0).abs() < 1e-12 && (re[1] - 1.0).abs() < 1e-12 && (re[2] - 2.0).abs() < 1e-12);
        let triple = solve_cubic(c(-3.0, 0.0), c(3.0, 0.0), c(-1.0, 0.0));
        assert!(triple.iter().all(|z| (z - 1.0).norm() < 1e-12));
    }

    #[test]
    fn distinct_real_roots() {
        let roots = [c(0.4, 0.0), c(0.3, 0.0), c(0.2, 0.0), c(0.1, 0.0)];
        let [a, b, cc, d] = coefficients(roots);
        assert_same_roots(solve_quartic(a, b, cc, d), roots, 1e-12);
    }

    #[test]
    fn complex_and_repeated_roots() {
        let roots = [c(1.0, 2.0), c(-0.5, 0.1), c(3.0, -1.0), c(0.0, 0.0)];
        let [a, b, cc, d] = coefficients(roots);
        assert_same_roots(solve_quartic(a, b, cc, d), roots, 1e-10);

        let roots = [c(0.25, 0.0), c(0.25, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let [a, b, cc, d] = coefficients(roots);
        assert_same_roots(solve_quartic(a, b, cc, d), roots, 1e-7);
    }

    #[test]
    fn biquadratic() {
        // x^4 - 5x^2 + 4 = (x^2 - 1)(x^2 - 4)
        let r = solve_quartic(c(0.0, 0.0), c(-5.0, 0.0), c(0.0, 0.0), c(4.0, 0.0));
        assert_same_roots(r, [c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)], 1e-12);
    }

    #[test]
    fn random_quartics() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let roots: [C; 4] = std::array::from_fn(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let [a, b, cc, d] = coefficients(roots);
            let found = solve_quartic(a, b, cc, d);
            for z in found {
                let f = (((z + a) * z + b) * z + cc) * z + d;
                assert!(f.norm() < 1e-12, "residual {f}");
            }
        }
    }
}
