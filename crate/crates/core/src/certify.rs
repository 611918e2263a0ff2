//! Zero-free gap certificates around `β(G)`.
//!
//! The certified gap is assembled from exact rationals computed at the lower
//! end of the β enclosure (every quantity involved increases with β), then
//! rounded down to a 64-bit dyadic. Each analytic ingredient is re-checked
//! numerically and recorded as a [`Check`]; a certificate is valid only when
//! every check passes.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analytic::{decompose_f_u, MajorantNode};
use crate::analytic::{gamma_f_u_truncated, gamma_poly, grid_rows, pow_q, FuPolys, GammaEstimate, GridRow};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphError};
use crate::indpoly::{independence_poly, IntPoly};
use crate::num::{parse_rational, round_down, Cplx, DEFAULT_PRECISION, MIN_PRECISION};
use crate::report::{all_pass, Check};
use crate::roots::{beta_bracket, BetaEnclosure};

pub use crate::roots::shearer_bound;

/// Relative slack allowed when comparing `f64` grid values that agree
/// analytically at `θ = 0`.
pub const GRID_RTOL: f64 = 1e-9;
/// Relative slack for the `f64` monotonicity test on the grid.
pub const MONOTONE_RTOL: f64 = 1e-12;

/// `β(H) >= 1/n`.
pub fn beta_lower(n: usize) -> Rational {
    assert!(n >= 1, "beta_lower needs n >= 1");
    Rational::from((1, n as u32))
}

/// `r_G = β^dia / 2n`, rounded down.
pub fn compute_r_g(n: usize, dia: usize, beta_lo: &Rational) -> Rational {
    round_down(&(pow_q(beta_lo, dia) / Rational::from(2 * n as u32)))
}

/// `θ_G = (β / 4n)^dia`, rounded down.
pub fn compute_theta_g(n: usize, dia: usize, beta_lo: &Rational) -> Rational {
    let base = beta_lo / Rational::from(4 * n as u32);
    round_down(&pow_q(&base, dia))
}

/// `(β / 2d)^(2Δ)`, rounded down: the parabola bound on the majorant is
/// claimed below this angle.
pub fn parabola_threshold(beta_lo: &Rational, d: usize, depth: usize) -> Rational {
    let base = beta_lo / Rational::from(2 * d.max(1) as u32);
    round_down(&pow_q(&base, 2 * depth))
}

/// `θ_eff = min(θ_G, (β/2d)^(2Δ))`.
pub fn effective_theta(theta_g: &Rational, threshold: &Rational) -> Rational {
    theta_g.clone().min(threshold.clone())
}

/// `min(r_G/4, r_G (β θ)^2 / 8)`, rounded down.
pub fn gap_formula(r_g: &Rational, beta_lo: &Rational, theta: &Rational, denom: u32) -> Rational {
    let bt = Rational::from(beta_lo * theta);
    let disc = (r_g * Rational::from(bt.square_ref())) / denom;
    let quarter = Rational::from(r_g / 4u32);
    round_down(&quarter.min(disc))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyConfig {
    pub tol: Rational,
    pub precision: u32,
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            tol: Rational::from((1, 1_000_000_000_000u64)),
            precision: DEFAULT_PRECISION,
            grid: 720,
            samples: 200,
            seed: 0,
        }
    }
}

impl CertifyConfig {
    fn validate(&self) -> Result<()> {
        if self.tol <= 0 {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if self.precision < MIN_PRECISION {
            return Err(Error::InvalidArgument(format!("precision must be >= {MIN_PRECISION}")));
        }
        if self.grid < 16 {
            return Err(Error::InvalidArgument("grid needs at least 16 points".into()));
        }
        Ok(())
    }
}

/// Side quantities reported for comparison; none of them gates validity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `θ_G <= (β/2d)^(2Δ)`, the hypothesis under which `θ_G` itself could
    /// be used directly.
    pub parabola_hypothesis: Check,
    pub parabola_threshold: String,
    /// `ln(gap·n/β) / ln(β/n)`; absent when the gap is zero.
    pub gap_exponent: Option<f64>,
    /// `r_G (1 - |f_u(-β)|)` versus the implemented `r_G (1 - |f|)/(2 - |f|)`.
    pub angle_disc_alt_radius_at_pi: f64,
    pub angle_disc_radius_at_pi: f64,
    /// Precision used for the small-angle majorant checks.
    pub high_precision: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapCertificate {
    pub graph: String,
    pub n: usize,
    pub dia: usize,
    pub max_degree: usize,
    /// Vertex whose `f_u` drives the angular checks (a graph center).
    pub pivot: usize,
    /// Depth `Δ` of the pivot's nested decomposition.
    pub depth: usize,
    pub beta: BetaEnclosure,
    pub r_g: Rational,
    pub theta_g: Rational,
    pub theta_eff: Rational,
    pub injectivity_radius: Rational,
    /// Gap the checks were run against; equals `certified_gap` when valid.
    pub candidate_gap: Rational,
    /// Zero when the certificate is invalid.
    pub certified_gap: Rational,
    /// `min(r_G/4, r_G (β θ_G)^2 / 4)`, for comparison only.
    pub quarter_factor_gap: Rational,
    pub gamma_iprime: GammaEstimate,
    pub gamma_f_u: GammaEstimate,
    pub checks: Vec<Check>,
    pub diagnostics: Diagnostics,
    pub valid: bool,
}

fn q_str(q: &Rational) -> Value {
    Value::String(q.to_string())
}

fn q_field(v: &Value, k: &str) -> Result<Rational> {
    v.get(k)
        .and_then(Value::as_str)
        .and_then(parse_rational)
        .ok_or_else(|| Error::Json(format!("certificate: bad or missing {k:?}")))
}

fn u_field(v: &Value, k: &str) -> Result<usize> {
    v.get(k)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Json(format!("certificate: bad or missing {k:?}")))
}

fn float_json(f: &Float) -> Value {
    Value::String(f.to_string_radix(10, None))
}

fn float_from(v: &Value, prec: u32) -> Result<Float> {
    let s = v.as_str().ok_or_else(|| Error::Json("expected a float string".into()))?;
    let parsed = Float::parse(s).map_err(|e| Error::Json(e.to_string()))?;
    Ok(Float::with_val(prec, parsed))
}

fn gamma_to_json(g: &GammaEstimate) -> Value {
    json!({
        "value": float_json(&g.value),
        "precision": g.value.prec(),
        "truncation": g.truncation,
        "certified_upper": g.certified_upper.as_ref().map(float_json),
        "decay": g.decay,
        "approx": g.value.to_f64(),
    })
}

fn gamma_from_json(v: &Value) -> Result<GammaEstimate> {
    let prec = u_field(v, "precision")? as u32;
    let value = float_from(v.get("value").unwrap_or(&Value::Null), prec)?;
    let certified_upper = match v.get("certified_upper") {
        None | Some(Value::Null) => None,
        Some(x) => Some(float_from(x, prec)?),
    };
    let decay = v.get("decay").and_then(Value::as_f64);
    Ok(GammaEstimate { value, truncation: u_field(v, "truncation")?, certified_upper, decay })
}

impl GapCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "graph": self.graph,
            "n": self.n,
            "dia": self.dia,
            "max_degree": self.max_degree,
            "pivot": self.pivot,
            "depth": self.depth,
            "beta": self.beta.to_json(),
            "r_G": q_str(&self.r_g),
            "theta_G": q_str(&self.theta_g),
            "theta_eff": q_str(&self.theta_eff),
            "injectivity_radius": q_str(&self.injectivity_radius),
            "candidate_gap": q_str(&self.candidate_gap),
            "certified_gap": q_str(&self.certified_gap),
            "quarter_factor_gap": q_str(&self.quarter_factor_gap),
            "gamma_Iprime": gamma_to_json(&self.gamma_iprime),
            "gamma_f_u": gamma_to_json(&self.gamma_f_u),
            "checks": self.checks,
            "diagnostics": self.diagnostics,
            "valid": self.valid,
            "approx": {
                "r_G": self.r_g.to_f64(),
                "theta_G": self.theta_g.to_f64(),
                "theta_eff": self.theta_eff.to_f64(),
                "injectivity_radius": self.injectivity_radius.to_f64(),
                "certified_gap": self.certified_gap.to_f64(),
                "quarter_factor_gap": self.quarter_factor_gap.to_f64(),
            },
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let missing = |k: &str| Error::Json(format!("certificate: bad or missing {k:?}"));
        Ok(GapCertificate {
            graph: v.get("graph").and_then(Value::as_str).ok_or_else(|| missing("graph"))?.to_string(),
            n: u_field(v, "n")?,
            dia: u_field(v, "dia")?,
            max_degree: u_field(v, "max_degree")?,
            pivot: u_field(v, "pivot")?,
            depth: u_field(v, "depth")?,
            beta: BetaEnclosure::from_json(v.get("beta").ok_or_else(|| missing("beta"))?)?,
            r_g: q_field(v, "r_G")?,
            theta_g: q_field(v, "theta_G")?,
            theta_eff: q_field(v, "theta_eff")?,
            injectivity_radius: q_field(v, "injectivity_radius")?,
            candidate_gap: q_field(v, "candidate_gap")?,
            certified_gap: q_field(v, "certified_gap")?,
            quarter_factor_gap: q_field(v, "quarter_factor_gap")?,
            gamma_iprime: gamma_from_json(v.get("gamma_Iprime").ok_or_else(|| missing("gamma_Iprime"))?)?,
            gamma_f_u: gamma_from_json(v.get("gamma_f_u").ok_or_else(|| missing("gamma_f_u"))?)?,
            checks: serde_json::from_value(v.get("checks").cloned().ok_or_else(|| missing("checks"))?)?,
            diagnostics: serde_json::from_value(v.get("diagnostics").cloned().ok_or_else(|| missing("diagnostics"))?)?,
            valid: v.get("valid").and_then(Value::as_bool).ok_or_else(|| missing("valid"))?,
        })
    }

    /// Human-readable summary, including the quarter-factor variant.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("graph              {}\n", self.graph));
        s.push_str(&format!("n, dia, d, depth   {}, {}, {}, {}\n", self.n, self.dia, self.max_degree, self.depth));
        s.push_str(&format!("beta               [{:.15e}, {:.15e}]{}\n", self.beta.lo.to_f64(), self.beta.hi.to_f64(), if self.beta.exact { " (exact)" } else { "" }));
        s.push_str(&format!("r_G                {:.6e}\n", self.r_g.to_f64()));
        s.push_str(&format!("theta_G            {:.6e}\n", self.theta_g.to_f64()));
        s.push_str(&format!("theta_eff          {:.6e}\n", self.theta_eff.to_f64()));
        s.push_str(&format!("injectivity radius {:.6e}\n", self.injectivity_radius.to_f64()));
        s.push_str(&format!("certified gap      {:.6e}  (factor 1/8)\n", self.certified_gap.to_f64()));
        s.push_str(&format!("quarter-factor gap {:.6e}  (factor 1/4 at theta_G)\n", self.quarter_factor_gap.to_f64()));
        s.push_str(&format!(
            "disc radius at pi  {:.6e} implemented, {:.6e} alternate form\n",
            self.diagnostics.angle_disc_radius_at_pi, self.diagnostics.angle_disc_alt_radius_at_pi
        ));
        for c in &self.checks {
            s.push_str(&format!("  [{}] {:<28} margin {:.3e}\n", if c.pass { "ok" } else { "FAIL" }, c.name, c.margin));
        }
        let h = &self.diagnostics.parabola_hypothesis;
        s.push_str(&format!("  (diagnostic) {} holds: {}\n", h.name, h.pass));
        s.push_str(&format!("valid              {}\n", self.valid));
        s
    }
}

/// `max |I'|` over `samples` points of the disc `D(center, radius)`.
fn sampled_sup_around(p: &IntPoly, center: f64, radius: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let rho = radius * rng.gen::<f64>().sqrt();
        let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        best = best.max(p.eval_c64(Complex64::new(center, 0.0) + Complex64::from_polar(rho, phi)).norm());
    }
    best
}

pub(crate) fn grid_checks(rows: &[GridRow], label: &str) -> [Check; 2] {
    let mut dom_ok = true;
    let mut dom_margin = f64::INFINITY;
    for r in rows {
        dom_ok &= r.abs_f_u <= r.majorant * (1.0 + GRID_RTOL);
        dom_margin = dom_margin.min(r.majorant - r.abs_f_u);
    }
    let mut mono_ok = true;
    let mut mono_margin = f64::INFINITY;
    for w in rows.windows(2) {
        mono_ok &= w[1].majorant <= w[0].majorant * (1.0 + MONOTONE_RTOL);
        mono_margin = mono_margin.min(w[0].majorant - w[1].majorant);
    }
    [
        Check::new(format!("majorant_domination_{label}"), dom_ok, dom_margin),
        Check::new(format!("majorant_monotone_{label}"), mono_ok, mono_margin),
    ]
}

/// Precision for comparisons at the scale `(β θ)^2 / 4`.
pub(crate) fn precision_for(base: u32, beta_lo: &Rational, theta: &Rational) -> u32 {
    let bt = Rational::from(beta_lo * theta);
    let q = Rational::from(bt.square_ref()) / 4u32;
    let bits = q.denom().significant_bits() as i64 - q.numer().significant_bits() as i64;
    base.max(DEFAULT_PRECISION) + 2 * bits.max(0) as u32
}

/// `F(θ)` at `θ_eff, 2θ_eff, 4θ_eff, ..` up to `limit`, each checked
/// non-increasing; returns the check.
fn ladder_check(m: &MajorantNode, beta: &Float, theta_eff: &Rational, limit: f64, prec: u32) -> Check {
    let mut theta = Float::with_val(prec, theta_eff);
    let mut prev = Float::with_val(prec, 1);
    let mut ok = true;
    let mut margin = f64::INFINITY;
    loop {
        match m.eval(beta, &theta) {
            Ok(f) => {
                let step = Float::with_val(prec, &prev - &f);
                ok &= step >= 0;
                margin = margin.min(step.to_f64());
                prev = f;
            }
            Err(_) => return Check::new("majorant_ladder", false, f64::NEG_INFINITY),
        }
        if theta >= limit {
            break;
        }
        theta *= 2u32;
        if theta > limit {
            theta = Float::with_val(prec, limit);
        }
    }
    Check::new("majorant_ladder", ok, margin)
}

/// `r_G (1 - |f_u(β e^{iθ})|) / (2 - |f_u|)`, clamped at zero.
pub fn zero_free_radius_at(g: &Graph, u: usize, beta: &BetaEnclosure, theta: f64, prec: u32) -> Result<Float> {
    let n = g.n();
    let dia = g.diameter()?;
    let r_g = compute_r_g(n, dia, beta.lower());
    let p = FuPolys::new(g, u)?;
    let b = beta.refine(&independence_poly(g), prec);
    let z = Cplx::from_polar(&b, &Float::with_val(prec, theta));
    let a = p.eval(&z)?.abs();
    Ok(angle_disc_radius(&Float::with_val(prec, &r_g), &a))
}

fn angle_disc_radius(r_g: &Float, abs_f: &Float) -> Float {
    let prec = r_g.prec();
    if *abs_f >= 1 {
        return Float::new(prec);
    }
    let one_minus = Float::with_val(prec, 1 - abs_f);
    let two_minus = Float::with_val(prec, 2 - abs_f);
    Float::with_val(prec, r_g * &one_minus) / two_minus
}

/// Uniform disc radius `r_G (β θ_eff)^2 / 8` for angles `θ >= θ_eff`.
pub fn uniform_disc_radius(g: &Graph, beta: &BetaEnclosure, theta: &Rational) -> Result<Rational> {
    let n = g.n();
    let dia = g.diameter()?;
    let u = g.center()?;
    let depth = decompose_f_u(g, u)?.depth();
    let r_g = compute_r_g(n, dia, beta.lower());
    let theta_g = compute_theta_g(n, dia, beta.lower());
    let theta_eff = effective_theta(&theta_g, &parabola_threshold(beta.lower(), g.max_degree(), depth));
    if *theta < theta_eff {
        return Err(Error::InvalidArgument(format!("angle {} is below theta_eff = {}", theta.to_f64(), theta_eff.to_f64())));
    }
    let bt = Rational::from(beta.lower() * &theta_eff);
    Ok(round_down(&((&r_g * Rational::from(bt.square_ref())) / 8u32)))
}

/// `r_G / 2`, after re-checking the derivative estimates it rests on.
/// A failed check is a hard error.
pub fn injectivity_radius(g: &Graph, beta: &BetaEnclosure, cfg: &CertifyConfig) -> Result<Rational> {
    let p = independence_poly(g);
    let dia = g.diameter()?;
    let r_g = compute_r_g(g.n(), dia, beta.lower());
    let (_, checks) = injectivity_checks(g, &p, beta, &r_g, cfg)?;
    if let Some(c) = checks.iter().find(|c| !c.pass) {
        return Err(Error::InvalidArgument(format!("injectivity check {} failed (margin {:e})", c.name, c.margin)));
    }
    Ok(Rational::from(&r_g / 2u32))
}

fn injectivity_checks(g: &Graph, p: &IntPoly, beta: &BetaEnclosure, r_g: &Rational, cfg: &CertifyConfig) -> Result<(GammaEstimate, Vec<Check>)> {
    let n = g.n();
    let dia = g.diameter()?;
    let prec = cfg.precision;
    let point = beta.point();
    let mut gamma = gamma_poly(p, 1, &point, prec)?;
    let inv_r = Float::with_val(prec, Rational::from(r_g.recip_ref()));
    let gamma_bound = Float::with_val(prec, Rational::from(n as u32) / pow_q(beta.lower(), dia));
    gamma.certified_upper = Some(inv_r.clone());
    let mut checks = vec![
        Check::new("gamma_iprime_bound", gamma.value <= gamma_bound, Float::with_val(prec, &gamma_bound - &gamma.value).to_f64()),
        Check::new("gamma_iprime_inv_r_G", gamma.value <= inv_r, Float::with_val(prec, &inv_r - &gamma.value).to_f64()),
    ];
    let dp = p.derivative(1);
    let d_at = dp.eval_exact(&point).to_f64().abs();
    let sup = sampled_sup_around(&dp, point.to_f64(), r_g.to_f64(), cfg.samples, cfg.seed).max(d_at);
    checks.push(Check::new("iprime_sampled_sup", sup <= 2.0 * d_at, 2.0 * d_at - sup));
    let r = r_g.to_f64();
    let sup_radius = r * d_at / sup;
    checks.push(Check::new("sup_injectivity_radius", sup_radius >= r / 2.0, sup_radius - r / 2.0));
    Ok((gamma, checks))
}

/// Certificate for `g`, bracketing β to `cfg.tol`.
pub fn certified_gap(g: &Graph, cfg: &CertifyConfig) -> Result<GapCertificate> {
    cfg.validate()?;
    if g.n() < 2 {
        return Err(Error::InvalidArgument("certification needs n >= 2".into()));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let beta = beta_bracket(g, &cfg.tol)?;
    certify_with_enclosure(g, &beta, cfg)
}

/// Certificate for `g` against a caller-supplied β enclosure (which is
/// re-verified by exact sign tests).
pub fn certify_with_enclosure(g: &Graph, beta: &BetaEnclosure, cfg: &CertifyConfig) -> Result<GapCertificate> {
    cfg.validate()?;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument("certification needs n >= 2".into()));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let prec = cfg.precision;
    let p = independence_poly(g);
    let dia = g.diameter()?;
    let d = g.max_degree();
    let u = g.center()?;
    let nested = decompose_f_u(g, u)?;
    let depth = nested.depth();
    let majorant = nested.majorant();
    let fu = FuPolys::new(g, u)?;
    let (lo, hi) = (beta.lower(), &beta.hi);
    let mut checks = Vec::new();

    let at_lo = p.eval_exact(&beta.lo);
    let at_hi = p.eval_exact(hi);
    let hi_ok = if beta.exact { at_hi == 0 } else { at_hi < 0 };
    let sign_ok = beta.lo > 0 && beta.lo < *hi && *hi <= 1 && at_lo > 0 && hi_ok;
    checks.push(Check::new("beta_signs", sign_ok, at_lo.to_f64().min(-at_hi.to_f64())));

    let r_g = compute_r_g(n, dia, lo);
    let theta_g = compute_theta_g(n, dia, lo);
    let threshold = parabola_threshold(lo, d, depth);
    let theta_eff = effective_theta(&theta_g, &threshold);
    let injectivity = Rational::from(&r_g / 2u32);
    let gap = gap_formula(&r_g, lo, &theta_eff, 8);
    let quarter_gap = gap_formula(&r_g, lo, &theta_g, 4);

    let (gamma_iprime, inj) = injectivity_checks(g, &p, beta, &r_g, cfg)?;
    checks.extend(inj);

    let mut gamma_f_u = gamma_f_u_truncated(g, u, &beta.point(), 2 * n, prec)?;
    let inv_r = Float::with_val(prec, Rational::from(r_g.recip_ref()));
    checks.push(Check::new("gamma_f_u_inv_r_G", gamma_f_u.value <= inv_r, Float::with_val(prec, &inv_r - &gamma_f_u.value).to_f64()));
    gamma_f_u.certified_upper = Some(inv_r);

    let hp = precision_for(prec, lo, &theta_eff);
    let beta_hp = beta.refine(&p, hp);
    let beta_f = beta_hp.to_f64();
    let rows = match grid_rows(&fu, &majorant, beta_f, cfg.grid) {
        Ok(rows) => {
            checks.extend(grid_checks(&rows, "beta"));
            Some(rows)
        }
        Err(_) => {
            checks.push(Check::new("majorant_domination_beta", false, f64::NEG_INFINITY));
            None
        }
    };
    match grid_rows(&fu, &majorant, beta_f / 2.0, cfg.grid) {
        Ok(rows) => checks.extend(grid_checks(&rows, "half_beta")),
        Err(_) => checks.push(Check::new("majorant_domination_half_beta", false, f64::NEG_INFINITY)),
    }
    let first_grid = std::f64::consts::PI / (cfg.grid - 1) as f64;
    checks.push(ladder_check(&majorant, &beta_hp, &theta_eff, first_grid, hp));

    let theta_hp = Float::with_val(hp, &theta_eff);
    let parabola = crate::analytic::parabola_margin(&majorant, &beta_hp, &theta_hp);
    let bt2 = {
        let bt = Rational::from(lo * &theta_eff);
        Float::with_val(hp, Rational::from(bt.square_ref())) / 4u32
    };
    match parabola {
        Ok(m) => {
            let rel = Float::with_val(hp, &m / &bt2).to_f64();
            checks.push(Check::new("parabola_theta_eff", m >= 0, rel));
        }
        Err(_) => checks.push(Check::new("parabola_theta_eff", false, f64::NEG_INFINITY)),
    }

    checks.push(Check::new("gap_le_injectivity", gap <= injectivity, Rational::from(&injectivity - &gap).to_f64()));
    let cover = &gap + Rational::from(hi * &theta_eff);
    checks.push(Check::new("small_angle_cover", cover <= injectivity, Rational::from(&injectivity - &cover).to_f64()));

    let ratio = Float::with_val(prec, &r_g / Rational::from(hi * 2u32));
    let angle = ratio.asin();
    let mid = Float::with_val(prec, pow_q(lo, dia) / Rational::from(4 * n as u32));
    let tg = Float::with_val(prec, &theta_g);
    let sub_ok = angle >= mid && mid >= tg;
    checks.push(Check::new("subtended_angle", sub_ok, Float::with_val(prec, &angle - &tg).to_f64()));

    let r_gf = r_g.to_f64();
    let gap_f = gap.to_f64();
    let (mut grid_ok, mut grid_margin) = (rows.is_some(), f64::INFINITY);
    // Angles below θ_eff are covered by the injectivity disc instead.
    let theta_eff_f = theta_eff.to_f64();
    for row in rows.iter().flatten().filter(|r| r.theta >= theta_eff_f) {
        let a = row.abs_f_u;
        let radius = if a >= 1.0 { 0.0 } else { r_gf * (1.0 - a) / (2.0 - a) };
        grid_ok &= radius >= gap_f;
        grid_margin = grid_margin.min(radius - gap_f);
    }
    checks.push(Check::new("angle_disc_grid", grid_ok, grid_margin));

    let at_pi = fu.eval(&Cplx::real(Float::with_val(prec, -&beta_hp)))?.abs();
    let r_gp = Float::with_val(prec, &r_g);
    let angle_disc_radius_at_pi = angle_disc_radius(&r_gp, &at_pi).to_f64();
    let angle_disc_alt_radius_at_pi = (Float::with_val(prec, 1 - &at_pi) * &r_gp).to_f64().max(0.0);

    let valid = all_pass(&checks);
    let certified = if valid { gap.clone() } else { Rational::new() };
    let gap_exponent = if certified > 0 {
        let b = Float::with_val(prec, hi);
        let nf = Float::with_val(prec, n as u32);
        let num = (Float::with_val(prec, &certified) * &nf / &b).ln();
        let den = (b / nf).ln();
        Some(Float::with_val(prec, num / den).to_f64())
    } else {
        None
    };
    let diagnostics = Diagnostics {
        parabola_hypothesis: Check::new("parabola_hypothesis_theta_G", theta_g <= threshold, Rational::from(&threshold - &theta_g).to_f64()),
        parabola_threshold: threshold.to_string(),
        gap_exponent,
        angle_disc_alt_radius_at_pi,
        angle_disc_radius_at_pi,
        high_precision: hp,
    };
    Ok(GapCertificate {
        graph: g.describe(),
        n,
        dia,
        max_degree: d,
        pivot: u,
        depth,
        beta: beta.clone(),
        r_g,
        theta_g,
        theta_eff,
        injectivity_radius: injectivity,
        candidate_gap: gap,
        certified_gap: certified,
        quarter_factor_gap: quarter_gap,
        gamma_iprime,
        gamma_f_u,
        checks,
        diagnostics,
        valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_graphs, make_cycle, make_path, make_star};
    use crate::roots::{all_roots, second_smallest_modulus};

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(shearer_bound(2), q(1, 4));
        assert_eq!(shearer_bound(3), q(4, 27));
        assert_eq!(beta_lower(5), q(1, 5));
    }

    #[test]
    fn radius_and_angle_values() {
        assert_eq!(compute_r_g(1, 0, &q(1, 1)), q(1, 2));
        assert_eq!(compute_theta_g(1, 0, &q(1, 1)), 1);
        assert_eq!(compute_r_g(2, 1, &q(1, 2)), q(1, 8));
        assert_eq!(compute_theta_g(2, 1, &q(1, 2)), q(1, 16));
        // P_3: β²/6 with β = (3 - √5)/2.
        let b = (3.0 - 5f64.sqrt()) / 2.0;
        let e = beta_bracket(&make_path(3).unwrap(), &q(1, 1_000_000_000_000)).unwrap();
        let r = compute_r_g(3, 2, &e.lo).to_f64();
        assert!((r - b * b / 6.0).abs() < 1e-12);
        assert!((r - 0.02432).abs() < 1e-5);
    }

    #[test]
    fn k2_certificate() {
        let g = make_path(2).unwrap();
        let c = certified_gap(&g, &CertifyConfig::default()).unwrap();
        assert!(c.valid, "{}", c.to_text());
        assert_eq!(c.injectivity_radius, q(1, 16));
        assert!(c.certified_gap > 0 && c.certified_gap <= c.injectivity_radius);
    }

    #[test]
    fn rejects_bad_input() {
        let mut g = Graph::empty(4).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(2, 3).unwrap();
        assert_eq!(certified_gap(&g, &CertifyConfig::default()), Err(Error::Graph(GraphError::Disconnected)));
        assert!(certified_gap(&Graph::empty(1).unwrap(), &CertifyConfig::default()).is_err());
    }

    #[test]
    fn certificates_on_small_graphs_are_sound() {
        let cfg = CertifyConfig::default();
        for n in 2..=5 {
            for g in connected_graphs(n) {
                let c = certified_gap(&g, &cfg).unwrap();
                assert!(c.valid, "{}", c.to_text());
                let rs = all_roots(&independence_poly(&g), 256).unwrap();
                let alpha = second_smallest_modulus(&rs, &c.beta).unwrap();
                let edge = Float::with_val(256, Rational::from(&c.beta.hi + &c.certified_gap));
                assert!(alpha > edge);
            }
        }
    }

    #[test]
    fn cycle_and_star() {
        for g in [make_cycle(6).unwrap(), make_star(3).unwrap(), make_path(7).unwrap()] {
            let c = certified_gap(&g, &CertifyConfig::default()).unwrap();
            assert!(c.valid, "{}", c.to_text());
            assert!(c.certified_gap > 0);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = certified_gap(&make_cycle(5).unwrap(), &CertifyConfig::default()).unwrap();
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back = GapCertificate::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn wider_enclosure_never_helps() {
        let g = make_star(3).unwrap();
        let cfg = CertifyConfig::default();
        let tight = certified_gap(&g, &cfg).unwrap();
        let wide_e = BetaEnclosure { lo: round_down(&(&tight.beta.lo - q(1, 1000))), ..tight.beta.clone() };
        let wide = certify_with_enclosure(&g, &wide_e, &cfg).unwrap();
        assert!(wide.certified_gap <= tight.certified_gap);
    }

    #[test]
    fn angle_disc_radius_shrinks_near_zero() {
        let g = make_star(3).unwrap();
        let e = beta_bracket(&g, &q(1, 1_000_000_000_000)).unwrap();
        let at_pi = zero_free_radius_at(&g, 1, &e, std::f64::consts::PI, 256).unwrap();
        let near = zero_free_radius_at(&g, 1, &e, 1e-6, 256).unwrap();
        assert!(at_pi > 0);
        assert!(near < 1e-12);
        // No root of I(S_3) inside the disc at θ = π.
        let b = Float::with_val(256, e.midpoint());
        let center = Cplx::real(-b);
        for r in all_roots(&independence_poly(&g), 256).unwrap().roots {
            assert!(r.z.sub(&center).abs() > at_pi);
        }
    }

    #[test]
    fn uniform_radius_is_constant() {
        let g = make_path(3).unwrap();
        let e = beta_bracket(&g, &q(1, 1_000_000_000_000)).unwrap();
        let a = uniform_disc_radius(&g, &e, &q(1, 2)).unwrap();
        let b = uniform_disc_radius(&g, &e, &q(3, 1)).unwrap();
        assert_eq!(a, b);
        assert!(a > 0 && a < compute_r_g(3, 2, &e.lo) / 2u32);
        assert!(uniform_disc_radius(&g, &e, &q(0, 1)).is_err());
    }
}
