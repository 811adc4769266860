//! Dormand–Prince 8(5,3) embedded Runge–Kutta pair for complex linear systems,
//! with running renormalization of the state.

use num_complex::Complex64;

use crate::{Error, Result};

// Coefficients of the 8th order method with 5th and 3rd order error estimators.
mod tableau {
    pub(crate) const STAGES: usize = 12;

    pub(crate) const C: [f64; 12] = [0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0];

    pub(crate) const A: [[f64; 12]; 12] = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0],
        [0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0],
        [-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0],
        [2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0],
    ];

    pub(crate) const B: [f64; 12] = [0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259];

    pub(crate) const E3: [f64; 13] = [-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082, 0.0];

    pub(crate) const E5: [f64; 13] = [0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0];}

/// Upper end of the renormalization window for the state modulus.
pub const RENORM_CEILING: f64 = 1e8;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

/// Integrator state for `du/ds = f(s, u)` with `u ∈ C^N` along a real parameter `s`.
///
/// The true state is `u · exp(log_scale)`; the stored `u` is rescaled whenever its
/// max-modulus leaves `[1, RENORM_CEILING]`, which is harmless for linear systems.
pub struct Dop853<F, const N: usize> {
    rhs: F,
    s: f64,
    u: [Complex64; N],
    f_current: [Complex64; N],
    log_scale: f64,
    h: f64,
    rtol: f64,
    atol: f64,
    renormalize: bool,
    accepted: usize,
    rejected: usize,
}

fn max_modulus<const N: usize>(u: &[Complex64; N]) -> f64 {
    u.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

impl<F, const N: usize> Dop853<F, N>
where
    F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
{
    /// `rtol` is the relative tolerance; the absolute one is `rtol * 1e-2` on the renormalized state.
    pub fn new(mut rhs: F, s0: f64, u0: [Complex64; N], rtol: f64, h0: f64) -> Self {
        let f_current = rhs(s0, &u0);
        let mut me = Self {
            rhs,
            s: s0,
            u: u0,
            f_current,
            log_scale: 0.0,
            h: h0.abs().max(1e-12),
            rtol,
            atol: rtol * 1e-2,
            renormalize: true,
            accepted: 0,
            rejected: 0,
        };
        me.renormalize_state();
        me
    }

    pub fn without_renormalization(mut self) -> Self {
        if self.log_scale != 0.0 {
            let factor = self.log_scale.exp();
            for c in self.u.iter_mut().chain(self.f_current.iter_mut()) {
                *c *= factor;
            }
            self.log_scale = 0.0;
        }
        self.renormalize = false;
        self
    }

    pub fn position(&self) -> f64 {
        self.s
    }

    pub fn state(&self) -> &[Complex64; N] {
        &self.u
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn steps(&self) -> (usize, usize) {
        (self.accepted, self.rejected)
    }

    fn renormalize_state(&mut self) {
        if !self.renormalize {
            return;
        }
        let m = max_modulus(&self.u);
        if m > 0.0 && m.is_finite() && !(1.0..=RENORM_CEILING).contains(&m) {
            let inv = 1.0 / m;
            for c in self.u.iter_mut().chain(self.f_current.iter_mut()) {
                *c *= inv;
            }
            self.log_scale += m.ln();
        }
    }

    /// Integrates up to `target` (either direction).
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        use tableau::*;
        let span = target - self.s;
        if span == 0.0 {
            return Ok(());
        }
        let dir = span.signum();
        let mut h = self.h.min(span.abs());
        let mut k = [[Complex64::new(0.0, 0.0); N]; STAGES + 1];
        let mut last_rejected = false;
        loop {
            let remaining = (target - self.s) * dir;
            if remaining <= 0.0 {
                return Ok(());
            }
            let min_h = 1e-14 * self.s.abs().max(1.0);
            if h < min_h {
                return Err(Error::StepUnderflow {
                    x: Complex64::new(self.s, 0.0),
                });
            }
            let last = h >= remaining;
            let step = if last { remaining } else { h } * dir;

            k[0] = self.f_current;
            for i in 1..STAGES {
                let mut ui = self.u;
                for (j, kj) in k.iter().enumerate().take(i) {
                    let a = A[i][j];
                    if a != 0.0 {
                        for (x, kx) in ui.iter_mut().zip(kj.iter()) {
                            *x += *kx * (step * a);
                        }
                    }
                }
                k[i] = (self.rhs)(self.s + C[i] * step, &ui);
            }
            let mut u_new = self.u;
            for (i, ki) in k.iter().enumerate().take(STAGES) {
                let b = B[i];
                if b != 0.0 {
                    for (x, kx) in u_new.iter_mut().zip(ki.iter()) {
                        *x += *kx * (step * b);
                    }
                }
            }
            let s_new = if last { target } else { self.s + step };
            let f_new = (self.rhs)(s_new, &u_new);
            k[STAGES] = f_new;

            let mut err5 = 0.0;
            let mut err3 = 0.0;
            for comp in 0..N {
                let scale = self.atol + self.rtol * self.u[comp].norm().max(u_new[comp].norm());
                let mut e5 = Complex64::new(0.0, 0.0);
                let mut e3 = Complex64::new(0.0, 0.0);
                for (i, ki) in k.iter().enumerate() {
                    e5 += ki[comp] * E5[i];
                    e3 += ki[comp] * E3[i];
                }
                err5 += (e5 / scale).norm_sqr();
                err3 += (e3 / scale).norm_sqr();
            }
            let err = if err5 == 0.0 && err3 == 0.0 {
                0.0
            } else {
                step.abs() * err5 / (((err5 + 0.01 * err3) * N as f64).sqrt())
            };
            if !err.is_finite() {
                h *= MIN_FACTOR;
                self.rejected += 1;
                last_rejected = true;
                continue;
            }

            if err <= 1.0 {
                self.s = s_new;
                self.u = u_new;
                self.f_current = f_new;
                self.accepted += 1;
                self.renormalize_state();
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-1.0 / 8.0)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                let factor = if last_rejected { factor.min(1.0) } else { factor };
                if !last {
                    h = step.abs() * factor;
                }
                self.h = h;
                last_rejected = false;
                if last {
                    return Ok(());
                }
            } else {
                h = step.abs() * (SAFETY * err.powf(-1.0 / 8.0)).max(MIN_FACTOR);
                self.rejected += 1;
                last_rejected = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth_with_renormalization() {
        // u' = (2 + i) u, exact u(s) = exp((2+i) s).
        let rate = Complex64::new(2.0, 1.0);
        let mut ode = Dop853::new(move |_s, u: &[Complex64; 1]| [rate * u[0]], 0.0, [Complex64::new(1.0, 0.0)], 1e-12, 0.01);
        ode.advance_to(30.0).unwrap();
        let log_modulus = ode.state()[0].norm().ln() + ode.log_scale();
        assert!((log_modulus - 60.0).abs() < 1e-9);
        let phase = ode.state()[0].arg();
        let expected = (30.0f64).rem_euclid(2.0 * std::f64::consts::PI);
        let expected = if expected > std::f64::consts::PI { expected - 2.0 * std::f64::consts::PI } else { expected };
        assert!((phase - expected).abs() < 1e-9);
        assert!(ode.log_scale() > 0.0);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        // y'' = -y, integrate from 0 to -3.
        let mut ode = Dop853::new(
            |_s, u: &[Complex64; 2]| [u[1], -u[0]],
            0.0,
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            1e-13,
            0.1,
        )
        .without_renormalization();
        ode.advance_to(-3.0).unwrap();
        assert!((ode.state()[0].re - (-3.0f64).sin()).abs() < 1e-11);
        assert!((ode.state()[1].re - (-3.0f64).cos()).abs() < 1e-11);
    }

    #[test]
    fn eighth_order_convergence() {
        // Fixed work comparison: error ratio between two tolerances reflects high order.
        let run = |tol: f64| {
            let mut ode = Dop853::new(
                |s, u: &[Complex64; 2]| [u[1], Complex64::new(-(1.0 + s * s), 0.0) * u[0]],
                0.0,
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                tol,
                0.1,
            )
            .without_renormalization();
            ode.advance_to(2.0).unwrap();
            (ode.state()[0], ode.steps().0)
        };
        let (reference, _) = run(1e-14);
        let (coarse, n) = run(1e-7);
        assert!((coarse - reference).norm() < 1e-6);
        assert!(n < 40, "too many steps: {n}");
    }
}
