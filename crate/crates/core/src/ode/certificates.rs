use std::f64::consts::FRAC_PI_2;

use super::oscillation::REVALIDATION_SHIFT;
use super::rk::{integrate, RkOptions, Trajectory};
use super::verdict::{DecayWitness, Verdict};
use super::ComparisonTransform;
use crate::completeness::{ray_length_profile, RayVerdict};
use crate::dims::DimensionConstants;
use crate::error::{CurvError, Result};
use crate::quadrature::integrate_log;
use crate::sampling::log_space;
use crate::warp::{warped_scalar_curvature, BaseGeometry, WarpProfile};

/// Inputs of the averaged comparison certificates. `f0`/`df0` (or `u0`/`du0`)
/// are the initial data of the averaged quantity at `t0`.
#[derive(Debug, Clone, PartialEq)]
pub enum CertificateParams {
    /// `F'' ≤ -b² F` for `F = ∫ f²`.
    Thm48 {
        n: usize,
        b: f64,
        t0: f64,
        f0: f64,
        df0: f64,
        t_end: f64,
    },
    /// `F'' ≤ -b²/n + (c/n) F / t²`.
    Thm413 {
        n: usize,
        c: f64,
        b: f64,
        t0: f64,
        f0: f64,
        df0: f64,
        t_end: f64,
    },
    /// `𝓕'' ≤ [n(n-1)C1²/t² + n C2/t² + n C C1/t - c_{n+1} b²] 𝓕`.
    Thm418 {
        n: usize,
        b: f64,
        c1: f64,
        c2: f64,
        c_u: f64,
        t0: f64,
        f0: f64,
        df0: f64,
        t_end: f64,
    },
    /// `U'' + (n/(n+1)) U'/t - ((n-1)/(4(n+1))) U/t² ≤ -ε² U^((n+3)/(n-1))`.
    Thm112 {
        n: usize,
        c: f64,
        volume: f64,
        t0: f64,
        u0: f64,
        du0: f64,
        t_end: f64,
    },
    /// Base average of the conformal equation over a warped end with
    /// `R(g) ≤ -κ²`. `du0 = None` starts with `v' = 0`.
    Thm38 {
        n: usize,
        kappa2: f64,
        delta: f64,
        profile: WarpProfile,
        t0: f64,
        u0: f64,
        du0: Option<f64>,
        t_end: f64,
    },
}

impl CertificateParams {
    pub fn kind(&self) -> &'static str {
        match self {
            CertificateParams::Thm48 { .. } => "thm48",
            CertificateParams::Thm413 { .. } => "thm413",
            CertificateParams::Thm418 { .. } => "thm418",
            CertificateParams::Thm112 { .. } => "thm112",
            CertificateParams::Thm38 { .. } => "thm38",
        }
    }
}

fn check_interval(t0: f64, t_end: f64) -> Result<()> {
    if !(t0 > 0.0 && t_end > t0 && t_end.is_finite()) {
        return Err(CurvError::InvalidArgument(format!(
            "needs 0 < t0 < T, got t0 = {t0}, T = {t_end}"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(CurvError::InvalidArgument(format!(
            "{name} must be positive, got {v}"
        )));
    }
    Ok(())
}

/// First crossing of the trajectory together with its shift under a
/// tolerance refinement.
struct CrossingRun {
    trajectory: Trajectory,
    crossing: Option<f64>,
    shift: f64,
}

fn run_to_crossing<F>(rhs: F, t0: f64, y0: f64, dy0: f64, t_end: f64) -> Result<CrossingRun>
where
    F: Fn(f64, f64, f64) -> f64 + Copy,
{
    let opts = RkOptions::default().stopping();
    let trajectory = integrate(rhs, t0, y0, dy0, t_end, &opts)?;
    let crossing = trajectory.crossings.first().map(|c| c.t);
    let shift = match crossing {
        Some(tc) => {
            let fine = integrate(rhs, t0, y0, dy0, t_end, &opts.refined(32.0))?;
            match fine.crossings.first() {
                Some(c) => ((c.t - tc) / tc).abs(),
                None => f64::INFINITY,
            }
        }
        None => 0.0,
    };
    Ok(CrossingRun {
        trajectory,
        crossing,
        shift,
    })
}

/// Nonexistence verdict from a crossing run, or inconclusive when the
/// crossing is missing or does not survive refinement.
fn crossing_verdict(name: &str, run: &CrossingRun, t_end: f64) -> Result<Verdict> {
    match run.crossing {
        None => Ok(Verdict::inconclusive(
            name,
            format!("comparison trajectory stays positive on [t0, {t_end}]; increase T"),
        )),
        Some(_) if run.shift >= REVALIDATION_SHIFT => Ok(Verdict::inconclusive(
            name,
            format!("crossing moved by {:e} under refinement", run.shift),
        )),
        Some(tc) => {
            Ok(Verdict::nonexistence(name, vec![tc])?.witness("revalidation_shift", run.shift))
        }
    }
}

/// Integrates the equality case of the chosen comparison inequality and
/// reports the witness the corresponding argument needs.
pub fn comparison_certificate(params: &CertificateParams) -> Result<Verdict> {
    match params {
        &CertificateParams::Thm48 {
            n,
            b,
            t0,
            f0,
            df0,
            t_end,
        } => thm48(n, b, t0, f0, df0, t_end),
        &CertificateParams::Thm413 {
            n,
            c,
            b,
            t0,
            f0,
            df0,
            t_end,
        } => thm413(n, c, b, t0, f0, df0, t_end),
        &CertificateParams::Thm418 {
            n,
            b,
            c1,
            c2,
            c_u,
            t0,
            f0,
            df0,
            t_end,
        } => thm418(n, b, [c1, c2, c_u], t0, f0, df0, t_end),
        &CertificateParams::Thm112 {
            n,
            c,
            volume,
            t0,
            u0,
            du0,
            t_end,
        } => thm112(n, c, volume, t0, u0, du0, t_end),
        CertificateParams::Thm38 {
            n,
            kappa2,
            delta,
            profile,
            t0,
            u0,
            du0,
            t_end,
        } => thm38(*n, *kappa2, *delta, profile, *t0, *u0, *du0, *t_end),
    }
}

fn thm48(n: usize, b: f64, t0: f64, f0: f64, df0: f64, t_end: f64) -> Result<Verdict> {
    const NAME: &str = "thm48";
    check_interval(t0, t_end)?;
    check_positive("F(t0)", f0)?;
    if n < 3 {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis n >= 3 violated (n = {n})"),
        ));
    }
    if !(b > 0.0) {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis b > 0 violated (b = {b})"),
        ));
    }
    let phase = (df0 / (b * f0)).atan();
    let predicted = t0 + (FRAC_PI_2 + phase) / b;
    if t_end < predicted {
        return Err(CurvError::IntervalTooShort {
            required: predicted * (1.0 + 1e-6),
        });
    }
    let run = run_to_crossing(move |_, f, _| -b * b * f, t0, f0, df0, t_end)?;
    Ok(crossing_verdict(NAME, &run, t_end)?
        .param("n", n as f64)
        .param("b", b)
        .param("t0", t0)
        .param("F0", f0)
        .param("dF0", df0)
        .param("T", t_end)
        .witness("scalar_lower_bound", b * b * n as f64)
        .witness("predicted_crossing", predicted))
}

fn thm413(n: usize, c: f64, b: f64, t0: f64, f0: f64, df0: f64, t_end: f64) -> Result<Verdict> {
    const NAME: &str = "thm413";
    check_interval(t0, t_end)?;
    check_positive("F(t0)", f0)?;
    if n < 3 {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis n >= 3 violated (n = {n})"),
        ));
    }
    let nf = n as f64;
    if !(c < 2.0 * nf) {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis c < 2n violated (c = {c}, 2n = {})", 2.0 * nf),
        )
        .param("c", c)
        .param("n", nf));
    }
    if !(b > 0.0) {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis b > 0 violated (b = {b})"),
        ));
    }
    let cp = c / nf;
    let run = run_to_crossing(
        move |t, f, _| -b * b / nf + cp * f / (t * t),
        t0,
        f0,
        df0,
        t_end,
    )?;
    let mut v = crossing_verdict(NAME, &run, t_end)?
        .param("n", nf)
        .param("c", c)
        .param("b", b)
        .param("t0", t0)
        .param("F0", f0)
        .param("dF0", df0)
        .param("T", t_end)
        .witness("c_prime", cp);
    if cp > 0.0 {
        let eps = (1.0 + (1.0 + 4.0 * cp).sqrt()) / 2.0;
        let t_far = t0 * 1e8;
        let hom = integrate(
            move |t, f, _| cp * f / (t * t),
            t0,
            1.0,
            1.0 / t0,
            t_far,
            &RkOptions::default(),
        )?;
        let (_, f_far, _) = hom.end();
        let f_dec = hom.u_at(t_far / 10.0).expect("inside the integrated range");
        let measured = (f_far / f_dec).log10();
        v = v
            .witness("epsilon_indicial", eps)
            .witness("epsilon_measured", measured)
            .witness("growth_defect", (measured - eps).abs());
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn thm418(
    n: usize,
    b: f64,
    bounds: [f64; 3],
    t0: f64,
    f0: f64,
    df0: f64,
    t_end: f64,
) -> Result<Verdict> {
    const NAME: &str = "thm418";
    let [c1, c2, c_u] = bounds;
    check_interval(t0, t_end)?;
    check_positive("calF(t0)", f0)?;
    if n < 3 {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis n >= 3 violated (n = {n})"),
        ));
    }
    if !(b > 0.0) {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis b > 0 violated (b = {b})"),
        ));
    }
    if !(c1 >= 0.0 && c2 >= 0.0 && c_u >= 0.0) {
        return Ok(Verdict::inconclusive(
            NAME,
            "hypothesis: bounds C1, C2 and C must be nonnegative",
        ));
    }
    let nf = n as f64;
    let c2_coef = DimensionConstants::new(n).c_np1 * b * b;
    let quad = nf * (nf - 1.0) * c1 * c1 + nf * c2;
    let lin = nf * c_u * c1;
    // extra terms ≤ c²/2 once 1/t is below the positive root of quad s² + lin s - c²/2
    let s = if quad > 0.0 {
        (-lin + (lin * lin + 2.0 * quad * c2_coef).sqrt()) / (2.0 * quad)
    } else if lin > 0.0 {
        c2_coef / (2.0 * lin)
    } else {
        f64::INFINITY
    };
    let t_bar = t0.max(1.0 / s);
    let c_prime = (c2_coef / 2.0).sqrt();
    let bound = t_bar + std::f64::consts::PI / c_prime;
    let rhs = move |t: f64, f: f64, _: f64| (quad / (t * t) + lin / t - c2_coef) * f;
    let run = run_to_crossing(rhs, t0, f0, df0, t_end)?;
    if run.crossing.is_none() && t_end < bound {
        return Err(CurvError::IntervalTooShort { required: bound });
    }
    let mut v = crossing_verdict(NAME, &run, t_end)?;
    if let Some(tc) = run.crossing {
        if tc > bound * (1.0 + 1e-9) {
            v = Verdict::inconclusive(
                NAME,
                format!("crossing {tc} is later than the bound {bound}"),
            );
        }
    }
    Ok(v.param("n", nf)
        .param("b", b)
        .param("C1", c1)
        .param("C2", c2)
        .param("C", c_u)
        .param("t0", t0)
        .param("T", t_end)
        .witness("c_squared", c2_coef)
        .witness("t_bar", t_bar)
        .witness("c_prime", c_prime)
        .witness("crossing_bound", bound))
}

fn signed_pow(u: f64, p: f64) -> f64 {
    u.signum() * u.abs().powf(p)
}

#[allow(clippy::too_many_arguments)]
fn thm112(
    n: usize,
    c: f64,
    volume: f64,
    t0: f64,
    u0: f64,
    du0: f64,
    t_end: f64,
) -> Result<Verdict> {
    const NAME: &str = "thm112";
    check_interval(t0, t_end)?;
    check_positive("U(t0)", u0)?;
    if n < 3 {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis n >= 3 violated (n = {n})"),
        ));
    }
    if !(c > 0.0) {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis c > 0 violated (c = {c})"),
        ));
    }
    check_positive("volume", volume)?;
    let nf = n as f64;
    let eps2 = c * c * (nf - 1.0) / (4.0 * nf * volume.powf(4.0 / (nf - 1.0)));
    let transform = ComparisonTransform::averaged_power(n, eps2.sqrt())?;
    let p = (nf + 3.0) / (nf - 1.0);
    let drift = nf / (nf + 1.0);
    let k = (nf - 1.0) / (4.0 * (nf + 1.0));
    let rhs =
        move |t: f64, u: f64, du: f64| -drift * du / t + k * u / (t * t) - eps2 * signed_pow(u, p);
    let run = run_to_crossing(rhs, t0, u0, du0, t_end)?;
    let tr = &run.trajectory;
    // v = U t^(-alpha); first sample with v' < 0
    let a = transform.alpha;
    let v_turn = (0..tr.t.len())
        .find(|&i| tr.u[i] > 0.0 && tr.du[i] - a * tr.u[i] / tr.t[i] < 0.0)
        .map(|i| tr.t[i]);
    let mut v = crossing_verdict(NAME, &run, t_end)?
        .param("n", nf)
        .param("c", c)
        .param("volume", volume)
        .param("t0", t0)
        .param("U0", u0)
        .param("dU0", du0)
        .param("T", t_end)
        .witness("epsilon_squared", eps2)
        .witness("alpha", a)
        .witness("q_alpha", super::averaged_quadratic(nf, a));
    if let Some(tv) = v_turn {
        v = v.witness("v_decreasing_from", tv);
    }
    Ok(v)
}

/// Hypothesis branch for the growth of `f`.
fn growth_branch(f: &WarpProfile, t_end: f64) -> Result<Option<(&'static str, f64)>> {
    let ratio = |t: f64| -> Result<f64> { Ok(f.value(t)? / (t * t.ln())) };
    let (r_hi, r_mid) = (ratio(t_end)?, ratio(t_end / 10.0)?);
    if r_hi <= r_mid * (1.0 + 1e-9) {
        return Ok(Some(("f <= C t ln t", r_mid.max(r_hi))));
    }
    let slope =
        |a: f64, b: f64| -> Result<f64> { Ok((f.value(b)? / f.value(a)?).ln() / (b / a).ln()) };
    let s_last = slope(t_end / 10.0, t_end)?;
    let s_prev = slope(t_end / 100.0, t_end / 10.0)?;
    if s_last > 1.05 && s_prev > 1.05 && s_last >= s_prev - 1e-3 {
        return Ok(Some(("f >= C t^alpha, alpha > 1", s_prev.min(s_last))));
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn thm38(
    n: usize,
    kappa2: f64,
    delta: f64,
    f: &WarpProfile,
    t0: f64,
    u0: f64,
    du0: Option<f64>,
    t_end: f64,
) -> Result<Verdict> {
    const NAME: &str = "thm38";
    check_interval(t0, t_end)?;
    check_positive("U(t0)", u0)?;
    if n < 3 {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis n >= 3 violated (n = {n})"),
        ));
    }
    if !(kappa2 > 0.0) {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis kappa^2 > 0 violated ({kappa2})"),
        ));
    }
    if !(delta > 0.0 && delta < kappa2) {
        return Ok(Verdict::inconclusive(
            NAME,
            format!("hypothesis 0 < delta < kappa^2 violated (delta = {delta})"),
        ));
    }
    if !(t_end / 100.0 > t0.max(1.0)) {
        return Err(CurvError::IntervalTooShort {
            required: 100.0 * t0.max(1.0) * 1.01,
        });
    }
    let nf = n as f64;
    let ff_min = 2.0 * (delta - kappa2) / (3.0 * nf + 1.0);
    let stated_c2 = 2.0 * (kappa2 - delta) / (3.0 * nf + 1.0);
    let base = |v: Verdict| {
        v.param("n", nf)
            .param("kappa2", kappa2)
            .param("delta", delta)
            .param("t0", t0)
            .param("T", t_end)
            .witness("ff_lower_bound", ff_min)
            .witness("stated_c_squared", stated_c2)
    };
    for t in log_space(t0, t_end, 200)? {
        let j = f.jet(t)?;
        if j.value * j.d2 < ff_min {
            return Ok(base(Verdict::inconclusive(
                NAME,
                format!("hypothesis f f'' >= 2(delta - kappa^2)/(3n+1) violated at t = {t}"),
            )));
        }
    }
    let Some((branch, branch_constant)) = growth_branch(f, t_end)? else {
        return Ok(base(Verdict::inconclusive(
            NAME,
            "neither f <= C t ln t nor f >= C t^alpha with alpha > 1 holds on the last decades",
        )));
    };

    let transform = ComparisonTransform::warp_power(n, delta)?;
    let a = transform.alpha;
    let c_np1 = DimensionConstants::new(n).c_np1;
    // coefficient of v/f in (f v')' = -k v/f; the f f'' terms cancel at n + 2a = 1
    let k_exact = c_np1 * kappa2;
    let k = delta.min(k_exact);
    let jet0 = f.jet(t0)?;
    let du0 = du0.unwrap_or(a * jet0.d1 / jet0.value * u0);
    let rhs = |t: f64, u: f64, du: f64| {
        let Ok(j) = f.jet(t) else {
            return f64::NAN;
        };
        let (fv, d1, d2) = (j.value, j.d1, j.d2);
        -nf * d1 / fv * du
            - c_np1 * (kappa2 + 2.0 * nf * fv * d2 + nf * (nf - 1.0) * d1 * d1) / (fv * fv) * u
    };
    // the bound is checked on the positive stretch; a crossing only strengthens the conclusion
    let tr = integrate(rhs, t0, u0, du0, t_end, &RkOptions::default().stopping())?;
    let crossing = tr.crossings.first().map(|c| c.t);
    // v = U f^(-a), v' = f^(-a) (U' - a (f'/f) U)
    let mut vs = Vec::with_capacity(tr.t.len());
    let mut dvs = Vec::with_capacity(tr.t.len());
    for i in 0..tr.t.len() {
        let j = f.jet(tr.t[i])?;
        let scale = (-a * j.value.ln()).exp();
        vs.push(scale * tr.u[i]);
        dvs.push(scale * (tr.du[i] - a * j.d1 / j.value * tr.u[i]));
    }
    let Some(io) = dvs.iter().position(|&d| d <= 0.0) else {
        return Ok(base(Verdict::inconclusive(
            NAME,
            "v' stays positive on [t0, T]; increase T",
        )));
    };
    let t_o = tr.t[io];
    let v_o = vs[io];
    if !(t_end / 10.0 > t_o) {
        return Ok(base(Verdict::inconclusive(
            NAME,
            format!("v' turns negative only at t = {t_o}; increase T"),
        )));
    }
    let inv_f = |t: f64| 1.0 / f.eval_raw(t);
    let bound_v = |s: f64| v_o * (-0.5 * k * s * s).exp();
    let mut s_acc = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for (i, &v) in vs.iter().enumerate().skip(io) {
        if i > io {
            s_acc += integrate_log(inv_f, tr.t[i - 1], tr.t[i]);
        }
        if v > 0.0 {
            worst = worst.max(v / bound_v(s_acc) - 1.0);
        }
    }
    if worst > 1e-8 {
        return Ok(base(Verdict::inconclusive(
            NAME,
            format!("trajectory exceeds the bounding profile by {worst:e}"),
        )));
    }
    let s_of = |t: f64| integrate_log(inv_f, t_o, t);
    let vb_of = |t: f64| bound_v(s_of(t));
    let (l_hi, l_mid) = (t_end.ln(), (t_end / 10.0).ln());
    let beta = -(vb_of(t_end).ln() - vb_of(t_end / 10.0).ln()) / (l_hi.ln() - l_mid.ln());
    if !(beta > 0.0) {
        return Ok(base(Verdict::inconclusive(
            NAME,
            format!("fitted beta = {beta} is not positive"),
        )));
    }
    let gamma = 1.0 + 2.0 * beta / (nf - 1.0);
    let constant = (io..tr.t.len())
        .filter(|&i| tr.t[i] > std::f64::consts::E && tr.u[i] > 0.0)
        .map(|i| {
            let t = tr.t[i];
            let l = t.ln();
            tr.u[i] * (t * l).powf((nf - 1.0) / 2.0) * l.powf(beta)
        })
        .fold(0.0, f64::max);
    let u_bound = |t: f64| vb_of(t) * (a * f.eval_raw(t).ln()).exp();
    let ray = ray_length_profile(u_bound, n, t_o, t_end)?;
    let decay = DecayWitness {
        beta,
        gamma,
        constant,
    };
    let verdict = if ray.verdict == RayVerdict::Finite {
        Verdict::incompleteness(NAME, decay, ray)
    } else {
        let mut v = Verdict::inconclusive(
            NAME,
            format!("ray of the bounding profile is {} on [t_o, T]", ray.verdict),
        );
        v.decay = Some(decay);
        v.ray = Some(ray);
        v
    };
    let verdict = match crossing {
        Some(tc) => verdict.witness("trajectory_crossing", tc),
        None => verdict,
    };
    Ok(base(verdict)
        .witness("alpha", a)
        .witness("k_exact", k_exact)
        .witness("k_used", k)
        .witness("t_o", t_o)
        .witness("v_t_o", v_o)
        .witness("bound_defect", worst.max(0.0))
        .witness("branch_constant", branch_constant)
        .witness(
            if branch.starts_with("f <=") {
                "branch_i"
            } else {
                "branch_ii"
            },
            1.0,
        ))
}

/// Barrier chain for warped ends with `R ≥ -n(n-1)/t²` over a base with
/// scalar curvature `-κ²` somewhere. A supplied profile is checked against
/// the hypothesis first.
pub fn barrier_certificate_33(
    kappa2: f64,
    n: usize,
    t_range: (f64, f64),
    profile: Option<&WarpProfile>,
) -> Result<Verdict> {
    const NAME: &str = "barrier33";
    if n < 3 {
        return Err(CurvError::DimensionTooSmall {
            required: 3,
            got: n,
        });
    }
    check_positive("kappa^2", kappa2)?;
    let (t0, t_end) = t_range;
    check_interval(t0, t_end)?;
    if !(t0 > 2.0) {
        return Err(CurvError::InvalidArgument(format!(
            "needs t0 > 2, got {t0}"
        )));
    }
    let nf = n as f64;
    let nn = nf * (nf - 1.0);
    if let Some(f) = profile {
        let base = BaseGeometry::abstract_constant(n, -kappa2, 1.0)?;
        for t in log_space(t0, t_end, 200)? {
            let r = warped_scalar_curvature(f, &base, t)?;
            if r < -nn / (t * t) {
                return Ok(Verdict::inconclusive(
                    NAME,
                    format!("hypothesis R >= -n(n-1)/t^2 violated at t = {t}"),
                )
                .param("n", nf)
                .param("kappa2", kappa2)
                .witness("t_violation", t)
                .witness("R_t_squared", r * t * t));
            }
        }
    }
    let eps = (nf + 1.0) / 2.0;
    let cap = (nf + 1.0) * (nf - 1.0) / 4.0;
    let t_far = t0 * 1e6;
    let lin = integrate(
        move |t, u, _| cap * u / (t * t),
        t0,
        1.0,
        1.0 / t0,
        t_far,
        &RkOptions::default(),
    )?;
    let growth = (lin.end().1 / lin.u_at(t_far / 10.0).expect("inside range")).log10();
    let coef = (nf + 1.0) / (4.0 * nf);
    let q = DimensionConstants::new(n).nonlin_exp;
    let rhs = move |t: f64, u: f64, _: f64| {
        let nl = if q == 0.0 { 1.0 } else { signed_pow(u, q) };
        coef * (nn * u / (t * t) - kappa2 * nl)
    };
    let run = run_to_crossing(rhs, t0, 1.0, 0.0, t_end)?;
    let tr = &run.trajectory;
    let linear_cap = (0..tr.t.len())
        .map(|i| tr.u[i] / tr.t[i])
        .fold(0.0, f64::max);
    let descent = tr.du.iter().position(|&d| d < 0.0).map(|i| tr.t[i]);
    let mut v = crossing_verdict(NAME, &run, t_end)?
        .param("n", nf)
        .param("kappa2", kappa2)
        .param("t0", t0)
        .param("T", t_end)
        .witness("epsilon", eps)
        .witness("growth_exponent", growth)
        .witness("linear_cap", linear_cap);
    if let Some(td) = descent {
        v = v.witness("u_prime_negative_from", td);
    }
    if growth > eps + 1e-3 {
        v = Verdict::inconclusive(NAME, format!("growth exponent {growth} exceeds {eps}"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::VerdictKind;
    use crate::warp::parse_profile;

    #[test]
    fn thm48_quarter_period() {
        let p = CertificateParams::Thm48 {
            n: 3,
            b: 0.5,
            t0: 3.0,
            f0: 1.0,
            df0: 0.0,
            t_end: 100.0,
        };
        let v = comparison_certificate(&p).unwrap();
        assert_eq!(v.kind, VerdictKind::Nonexistence);
        let expected = 3.0 + std::f64::consts::PI;
        assert!((v.crossings[0] / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn thm413_growth_and_scope() {
        let p = CertificateParams::Thm413 {
            n: 3,
            c: 5.0,
            b: 1.0,
            t0: 3.0,
            f0: 1.0,
            df0: 0.0,
            t_end: 1e4,
        };
        let v = comparison_certificate(&p).unwrap();
        assert_eq!(v.kind, VerdictKind::Nonexistence);
        assert!(v.witness["growth_defect"] < 1e-2);
        assert!((v.witness["epsilon_indicial"] - 1.884_428).abs() < 1e-5);
        let out = comparison_certificate(&CertificateParams::Thm413 {
            n: 3,
            c: 7.0,
            b: 1.0,
            t0: 3.0,
            f0: 1.0,
            df0: 0.0,
            t_end: 1e4,
        })
        .unwrap();
        assert_eq!(out.kind, VerdictKind::Inconclusive);
        assert!(out.reason.unwrap().contains("c < 2n"));
    }

    #[test]
    fn thm418_crossing_before_bound() {
        let p = CertificateParams::Thm418 {
            n: 3,
            b: 2.0,
            c1: 1.0,
            c2: 1.0,
            c_u: 1.0,
            t0: 3.0,
            f0: 1.0,
            df0: 0.0,
            t_end: 1e3,
        };
        let v = comparison_certificate(&p).unwrap();
        assert_eq!(v.kind, VerdictKind::Nonexistence);
        assert!(v.crossings[0] <= v.witness["crossing_bound"]);
    }

    #[test]
    fn thm112_forces_a_crossing() {
        let p = CertificateParams::Thm112 {
            n: 3,
            c: 1.0,
            volume: 1.0,
            t0: 3.0,
            u0: 1.0,
            du0: 0.0,
            t_end: 1e4,
        };
        let v = comparison_certificate(&p).unwrap();
        assert_eq!(v.kind, VerdictKind::Nonexistence);
        assert!(
            (v.crossings[0] - 8.755_837).abs() < 1e-4,
            "{:?}",
            v.crossings
        );
    }

    #[test]
    fn thm38_cone_log_profile() {
        let f = parse_profile("t*ln(t)").unwrap();
        let p = CertificateParams::Thm38 {
            n: 3,
            kappa2: 6.0,
            delta: 1.0,
            profile: f,
            t0: 3.0,
            u0: 1.0,
            du0: None,
            t_end: 1e4,
        };
        let v = comparison_certificate(&p).unwrap();
        assert_eq!(v.kind, VerdictKind::Incompleteness, "{}", v.to_text());
        let d = v.decay.unwrap();
        assert!(d.beta > 0.0 && d.gamma > 1.0);
        assert_eq!(v.ray.unwrap().verdict, RayVerdict::Finite);
    }

    #[test]
    fn barrier_chain() {
        let v = barrier_certificate_33(6.0, 3, (3.0, 1e4), None).unwrap();
        assert_eq!(v.kind, VerdictKind::Nonexistence);
        assert!(v.witness["growth_exponent"] <= 2.0 + 1e-3);
        let f = parse_profile("t*ln(t)").unwrap();
        let v = barrier_certificate_33(6.0, 3, (3.0, 1e4), Some(&f)).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert!(barrier_certificate_33(6.0, 2, (3.0, 1e4), None).is_err());
    }
}
