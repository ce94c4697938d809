//! Shared test oracles, independent of the library implementation.

#![allow(dead_code)]

/// Bohr magneton over h, MHz/T (restated here so the oracle does not
/// depend on library internals).
pub const MU_B: f64 = 13996.2449;
/// Nuclear gyromagnetic factor of the I = 7/2 nucleus, MHz/T.
pub const GN: f64 = 11.213;

/// One closed-form level branch of the isotropic-hyperfine S = 1/2 system
/// in an axial field: the stretched states `m = ±(I + 1/2)` and, for
/// interior total projection m, the ± branches of the 2×2 block
///
/// ```text
/// E±(m) = −g_n B m − A/4 ± √( ((g_e B + g_n B + A m)/2)² + (A²/4)((I+½)² − m²) )
/// ```
///
/// derived directly from H = g_e B S_z − g_n B I_z + A S·I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    StretchedUp,
    StretchedDown,
    Interior { m: f64, upper: bool },
}

/// All 4I + 2 branches for nuclear spin `i`.
pub fn branches(i: f64) -> Vec<Branch> {
    let mut out = vec![Branch::StretchedUp, Branch::StretchedDown];
    let mut m = -(i - 0.5);
    while m <= i - 0.5 + 1e-9 {
        out.push(Branch::Interior { m, upper: false });
        out.push(Branch::Interior { m, upper: true });
        m += 1.0;
    }
    out
}

/// Closed-form level energy, MHz.
pub fn breit_rabi_energy(branch: Branch, g: f64, a_mhz: f64, i: f64, b_t: f64) -> f64 {
    let ge = g * MU_B;
    match branch {
        Branch::StretchedUp => 0.5 * ge * b_t - GN * b_t * i + 0.5 * a_mhz * i,
        Branch::StretchedDown => -0.5 * ge * b_t + GN * b_t * i + 0.5 * a_mhz * i,
        Branch::Interior { m, upper } => {
            let u = 0.5 * ((ge + GN) * b_t + a_mhz * m);
            let c2 = 0.25 * a_mhz * a_mhz * ((i + 0.5).powi(2) - m * m);
            let root = (u * u + c2).sqrt();
            let base = -GN * b_t * m - 0.25 * a_mhz;
            if upper {
                base + root
            } else {
                base - root
            }
        }
    }
}

/// Analytic dE/dB of a branch, MHz/T.
pub fn breit_rabi_derivative(branch: Branch, g: f64, a_mhz: f64, i: f64, b_t: f64) -> f64 {
    let ge = g * MU_B;
    match branch {
        Branch::StretchedUp => 0.5 * ge - GN * i,
        Branch::StretchedDown => -0.5 * ge + GN * i,
        Branch::Interior { m, upper } => {
            let u = 0.5 * ((ge + GN) * b_t + a_mhz * m);
            let c2 = 0.25 * a_mhz * a_mhz * ((i + 0.5).powi(2) - m * m);
            let root = (u * u + c2).sqrt();
            let droot = 0.5 * (ge + GN) * u / root;
            if upper {
                -GN * m + droot
            } else {
                -GN * m - droot
            }
        }
    }
}

/// The 16 sorted closed-form levels.
pub fn breit_rabi_levels(g: f64, a_mhz: f64, i: f64, b_t: f64) -> Vec<f64> {
    let mut levels: Vec<f64> =
        branches(i).into_iter().map(|br| breit_rabi_energy(br, g, a_mhz, i, b_t)).collect();
    levels.sort_by(f64::total_cmp);
    levels
}

/// df/dB = 0 fields of the |E_a − E_b| transition inside (b_lo, b_hi),
/// found by sign scanning the analytic derivative and bisecting.
pub fn breit_rabi_extrema(
    a_branch: Branch,
    b_branch: Branch,
    g: f64,
    a_mhz: f64,
    i: f64,
    b_lo: f64,
    b_hi: f64,
) -> Vec<(f64, f64)> {
    let deriv = |b: f64| {
        breit_rabi_derivative(a_branch, g, a_mhz, i, b)
            - breit_rabi_derivative(b_branch, g, a_mhz, i, b)
    };
    let freq = |b: f64| {
        (breit_rabi_energy(a_branch, g, a_mhz, i, b) - breit_rabi_energy(b_branch, g, a_mhz, i, b))
            .abs()
    };
    let n = 5001;
    let step = (b_hi - b_lo) / (n - 1) as f64;
    let mut out = Vec::new();
    let mut prev_b = b_lo;
    let mut prev_d = deriv(prev_b);
    for k in 1..n {
        let b = b_lo + step * k as f64;
        let d = deriv(b);
        if prev_d == 0.0 || prev_d * d < 0.0 {
            let (mut lo, mut hi) = (prev_b, b);
            let mut d_lo = prev_d;
            while hi - lo > 1e-9 {
                let mid = 0.5 * (lo + hi);
                let d_mid = deriv(mid);
                if d_lo * d_mid <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    d_lo = d_mid;
                }
            }
            let b_star = 0.5 * (lo + hi);
            out.push((b_star, freq(b_star)));
        }
        prev_b = b;
        prev_d = d;
    }
    out
}

/// Standard-normal sampler on a seeded ChaCha stream (Box–Muller).
pub struct GaussianStream {
    rng: rand_chacha::ChaCha8Rng,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        GaussianStream { rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_gaussian(&mut self) -> f64 {
        use rand::Rng;
        let u1: f64 = self.rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = self.rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        use rand::Rng;
        self.rng.gen_range(lo..hi)
    }
}
