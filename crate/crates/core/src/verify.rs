//! Reference-value checks printed by `ebnoise verify`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::amendable::{self, FilterCandidate};
use crate::channel::{Channel, DensityMatrix, UnitalChannel};
use crate::error::Result;
use crate::fixtures;
use crate::gad;
use crate::gaussian;
use crate::measures::{self, NcResult};

/// How the computed value is compared with the expected one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `|computed - expected| ≤ tol`
    Within(f64),
    /// `computed > expected`
    Above,
    /// `computed ≤ expected`
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureRow {
    pub name: &'static str,
    pub source: &'static str,
    pub expected: f64,
    pub computed: f64,
    pub check: Check,
    pub pass: bool,
}

impl FixtureRow {
    fn new(
        name: &'static str,
        source: &'static str,
        expected: f64,
        computed: f64,
        check: Check,
    ) -> Self {
        let pass = match check {
            // exact integers (and infinities) compare equal with tolerance 0
            Check::Within(tol) => computed == expected || (computed - expected).abs() <= tol,
            Check::Above => computed > expected,
            Check::AtMost => computed <= expected,
        };
        Self {
            name,
            source,
            expected,
            computed,
            check,
            pass,
        }
    }
}

/// Six significant digits; integers print without a fraction.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return if x > 0.0 {
            "inf".into()
        } else {
            format!("{x}")
        };
    }
    if x == x.trunc() && x.abs() < 1e15 {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-3..6).contains(&mag) {
        format!("{:.*}", (5 - mag) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn nc_value(n: NcResult) -> f64 {
    n.finite().map_or(f64::INFINITY, f64::from)
}

fn norm_of_power(c: &UnitalChannel, n: u32) -> f64 {
    crate::numerics::trace_norm(&c.t().pow(n))
}

/// Evaluates every fixture. Errors only if a fixture cannot be constructed.
pub fn fixture_table() -> Result<Vec<FixtureRow>> {
    use Check::*;
    let lam = fixtures::lambda_example();
    let t = fixtures::t_newt();
    let tbar = fixtures::t_bar();
    let t3 = fixtures::t_eb3();
    let tbar3 = fixtures::t_bar_eb3();
    let id: Channel = UnitalChannel::identity().into();
    let cap = measures::DEFAULT_CAP;
    let s2 = std::f64::consts::SQRT_2;

    let werner = measures::mu_given_rho0(&id, &DensityMatrix::maximally_mixed(), 1e-8)?;
    let o = FilterCandidate::orthogonal(*fixtures::o_swap().t())?;
    let tc: Channel = t.clone().into();

    Ok(vec![
        FixtureRow::new(
            "trace-norm Λ",
            "diag(0.73, 0.5, 0.5)",
            1.73,
            lam.trace_norm(),
            Within(1e-9),
        ),
        FixtureRow::new(
            "trace-norm Λ²",
            "Λ squared",
            1.0329,
            norm_of_power(&lam, 2),
            Within(1e-4),
        ),
        FixtureRow::new(
            "trace-norm Λ³",
            "Λ cubed",
            0.6389,
            norm_of_power(&lam, 3),
            Within(1e-3),
        ),
        FixtureRow::new(
            "trace-norm T²",
            "T = OΛ, O swaps x and y",
            0.98,
            norm_of_power(&t, 2),
            Within(1e-9),
        ),
        FixtureRow::new(
            "EB2 non-convexity",
            "T̄ = (T + Tᵀ)/2 squared",
            1.0065,
            norm_of_power(&tbar, 2),
            Within(1e-4),
        ),
        FixtureRow::new(
            "trace-norm T³ (EB3 pair)",
            "Λ = diag(0.91, 0.6, 0.55)",
            0.9908,
            norm_of_power(&t3, 3),
            Within(1e-3),
        ),
        FixtureRow::new(
            "trace-norm T̄³ (EB3 pair)",
            "mixture of the EB3 pair",
            1.0269,
            norm_of_power(&tbar3, 3),
            Within(1e-2),
        ),
        FixtureRow::new(
            "EB3 non-convexity",
            "‖T̄³‖₁ exceeds 1",
            1.0,
            norm_of_power(&tbar3, 3),
            Above,
        ),
        FixtureRow::new(
            "werner threshold",
            "identity channel, ρ₀ = 1/2, PPT bisection",
            2.0 / 3.0,
            werner,
            Within(1e-5),
        ),
        FixtureRow::new(
            "μ_c of T",
            "(‖T‖₁ - 1)/‖T‖₁",
            0.73 / 1.73,
            measures::mu_c_unital(&t),
            Within(1e-4),
        ),
        FixtureRow::new(
            "μ_c upper bound",
            "d/(1 + d) at d = 2",
            2.0 / 3.0,
            measures::mu_c_upper_bound(2)?,
            Within(1e-12),
        ),
        FixtureRow::new(
            "n_c of Λ",
            "‖Λ³‖₁ ≤ 1 < ‖Λ²‖₁",
            3.0,
            nc_value(measures::n_c(&lam.clone().into(), cap)?),
            Within(0.0),
        ),
        FixtureRow::new(
            "n_c of T",
            "‖T²‖₁ = 0.98",
            2.0,
            nc_value(measures::n_c(&tc, cap)?),
            Within(0.0),
        ),
        FixtureRow::new(
            "n_c of identity",
            "unitary channels never break entanglement",
            f64::INFINITY,
            nc_value(measures::n_c(&id, cap)?),
            Within(0.0),
        ),
        FixtureRow::new(
            "amended order of T",
            "filter O† between uses of T",
            3.0,
            nc_value(amendable::amend_order(&tc, &o, cap)?),
            Within(0.0),
        ),
        FixtureRow::new(
            "GAD μ_c at p = 0",
            "GAD reduces to the identity",
            2.0 / 3.0,
            gad::mu_c_gad(0.0, 0.3)?,
            Within(1e-12),
        ),
        FixtureRow::new(
            "GAD μ_c zero",
            "p = 2(√2 - 1), γ = 1/2",
            0.0,
            gad::mu_c_gad(2.0 * (s2 - 1.0), 0.5)?,
            Within(1e-6),
        ),
        FixtureRow::new(
            "GAD μ_c(Ψ²) zero",
            "p = 2 - √2, γ = 1/2",
            0.0,
            gad::mu_c_gad_squared(2.0 - s2, 0.5)?,
            Within(1e-6),
        ),
        FixtureRow::new(
            "p₁(1/2)",
            "2(√2 - 1)",
            2.0 * (s2 - 1.0),
            gad::p_n(0.5, 1),
            Within(1e-12),
        ),
        FixtureRow::new(
            "p₂(1/2)",
            "2 - √2",
            2.0 - s2,
            gad::p_n(0.5, 2),
            Within(1e-12),
        ),
        FixtureRow::new(
            "S₁ boundary as γ → 0",
            "(√5 - 1)/2",
            (5f64.sqrt() - 1.0) / 2.0,
            gad::amend_boundary_s1(1e-6)?,
            Within(1e-3),
        ),
        FixtureRow::new(
            "attenuation EB edge",
            "k = 0.5, N₀ = k²",
            1.0,
            nc_value(gaussian::n_c_attenuation(0.5, 0.25, cap)?),
            Within(0.0),
        ),
        FixtureRow::new(
            "attenuation EB² edge",
            "k = 0.5, N₀ = k⁴/(1 + k²)",
            2.0,
            nc_value(gaussian::n_c_attenuation(0.5, 0.0625 / 1.25, cap)?),
            Within(0.0),
        ),
        FixtureRow::new(
            "amplification EB edge",
            "k = 2, N₀ = 1",
            1.0,
            nc_value(gaussian::n_c_amplification(2.0, 1.0, cap)?),
            Within(0.0),
        ),
        FixtureRow::new(
            "amplification EB² edge",
            "k = 2, N₀ = 1/(1 + k²)",
            2.0,
            nc_value(gaussian::n_c_amplification(2.0, 0.2, cap)?),
            Within(0.0),
        ),
    ])
}

pub fn render(rows: &[FixtureRow]) -> String {
    let w = rows
        .iter()
        .map(|r| r.name.chars().count())
        .max()
        .unwrap_or(4)
        .max(4);
    let ws = rows
        .iter()
        .map(|r| r.source.chars().count())
        .max()
        .unwrap_or(6)
        .max(6);
    let pad = |s: &str, n: usize| format!("{s}{}", " ".repeat(n.saturating_sub(s.chars().count())));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} | {} | {:>12} | {:>12} | {:>10} | result",
        pad("name", w),
        pad("source", ws),
        "expected",
        "computed",
        "tolerance"
    );
    for r in rows {
        let tol = match r.check {
            Check::Within(t) => sig6(t),
            Check::Above => format!("> {}", sig6(r.expected)),
            Check::AtMost => format!("≤ {}", sig6(r.expected)),
        };
        let _ = writeln!(
            out,
            "{} | {} | {:>12} | {:>12} | {:>10} | {}",
            pad(r.name, w),
            pad(r.source, ws),
            sig6(r.expected),
            sig6(r.computed),
            tol,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    out
}
