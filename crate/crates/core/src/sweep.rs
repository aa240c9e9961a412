//! Grid sweeps producing the CSV tables behind the region plots.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::Serialize;

use crate::amendable::{self, FilterCandidate};
use crate::channel::{self, in_tetrahedron, Channel, GadParams, UnitalChannel, CONTRACTION_TOL};
use crate::error::{Error, Result};
use crate::gad;
use crate::gaussian::{self, Family, IsoChannel};
use crate::measures::{self, OptimizerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig2Inset,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig2Inset,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig2Inset => "fig2-inset",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    pub fn header(&self) -> &'static [&'static str] {
        match self {
            Figure::Fig1 => &["lambda1", "lambda2", "ebn_order"],
            Figure::Fig2 => &["p", "gamma", "n_c"],
            Figure::Fig2Inset => &["p", "mu_c", "mu_c_sq"],
            Figure::Fig3 => &["p", "gamma", "amendable", "filter_kind"],
            Figure::Fig4 => &["p", "mu_c_sq", "mu_c_filtered"],
            Figure::Fig5 => &["k", "n0", "family", "n_c"],
        }
    }

    /// Number of swept axes.
    pub fn dims(&self) -> usize {
        match self {
            Figure::Fig2Inset | Figure::Fig4 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSweep(format!("unknown figure `{s}`")))
    }
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    min: f64,
    max: f64,
    steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidSweep(format!(
                "axis needs finite min < max, got [{min}, {max}]"
            )));
        }
        if steps < 2 {
            return Err(Error::InvalidSweep(format!(
                "axis needs at least 2 steps, got {steps}"
            )));
        }
        Ok(Self { min, max, steps })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

impl FromStr for Axis {
    type Err = Error;
    /// `min:max:steps`
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSweep(format!("axis `{s}` is not min:max:steps"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        Axis::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        )
    }
}

/// Parameters held fixed during a sweep. Unset fields take per-figure
/// defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fixed {
    pub lambda3: Option<f64>,
    pub gamma: Option<f64>,
    pub filter: Option<FilterCandidate>,
    pub family: Option<Family>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    figure: Figure,
    axes: Vec<Axis>,
    lambda3: f64,
    gamma: f64,
    filter: FilterCandidate,
    family: Family,
}

fn inside(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if v >= lo && v <= hi {
        Ok(())
    } else {
        Err(Error::InvalidSweep(format!(
            "{name} = {v} outside [{lo}, {hi}]"
        )))
    }
}

impl SweepSpec {
    /// Default grid for a figure at the given resolution per axis.
    pub fn default_axes(figure: Figure, family: Family, steps: usize) -> Result<Vec<Axis>> {
        Ok(match figure {
            Figure::Fig1 => vec![Axis::new(-1.0, 1.0, steps)?, Axis::new(-1.0, 1.0, steps)?],
            Figure::Fig2 => vec![Axis::new(0.0, 1.0, steps)?, Axis::new(0.0, 1.0, steps)?],
            Figure::Fig2Inset | Figure::Fig4 => vec![Axis::new(0.0, 1.0, steps)?],
            Figure::Fig3 => vec![Axis::new(0.0, 1.0, steps)?, Axis::new(0.0, 0.5, steps)?],
            Figure::Fig5 => {
                let k = match family {
                    Family::Attenuation => Axis::new(0.01, 0.99, steps)?,
                    Family::Amplification => Axis::new(1.01, 3.0, steps)?,
                };
                vec![k, Axis::new(0.0, 1.2, steps)?]
            }
        })
    }

    /// Validates the axes and fixed parameters against the figure's domain.
    pub fn new(
        figure: Figure,
        axes: Option<Vec<Axis>>,
        fixed: Fixed,
        steps: usize,
    ) -> Result<Self> {
        let family = fixed.family.unwrap_or(Family::Attenuation);
        let gamma_default = match (figure, &fixed.filter) {
            (Figure::Fig4, Some(FilterCandidate::R2R1)) => 0.4,
            (Figure::Fig4, _) => 0.1,
            _ => 1.0 / 3.0,
        };
        let filter = fixed.filter.clone().unwrap_or(match fixed.gamma {
            Some(g) if figure == Figure::Fig4 && g > 0.25 => FilterCandidate::R2R1,
            _ => FilterCandidate::Pauli(1),
        });
        let axes = match axes {
            Some(a) => a,
            None => Self::default_axes(figure, family, steps)?,
        };
        if axes.len() != figure.dims() {
            return Err(Error::InvalidSweep(format!(
                "{figure} sweeps {} axes, got {}",
                figure.dims(),
                axes.len()
            )));
        }
        let spec = Self {
            figure,
            axes,
            lambda3: fixed.lambda3.unwrap_or(0.5),
            gamma: fixed.gamma.unwrap_or(gamma_default),
            filter,
            family,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let a = &self.axes;
        match self.figure {
            Figure::Fig1 => {
                inside("lambda1", a[0].min, -1.0, 1.0)?;
                inside("lambda1", a[0].max, -1.0, 1.0)?;
                inside("lambda2", a[1].min, -1.0, 1.0)?;
                inside("lambda2", a[1].max, -1.0, 1.0)?;
                inside("lambda3", self.lambda3, -1.0, 1.0)?;
            }
            Figure::Fig2 | Figure::Fig3 => {
                inside("p", a[0].min, 0.0, 1.0)?;
                inside("p", a[0].max, 0.0, 1.0)?;
                inside("gamma", a[1].min, 0.0, 1.0)?;
                inside("gamma", a[1].max, 0.0, 1.0)?;
            }
            Figure::Fig2Inset | Figure::Fig4 => {
                inside("p", a[0].min, 0.0, 1.0)?;
                inside("p", a[0].max, 0.0, 1.0)?;
                inside("gamma", self.gamma, 0.0, 1.0)?;
                if self.filter.rotation().determinant() < 0.0 {
                    return Err(Error::InvalidSweep(
                        "fig4 filter must be a proper rotation".into(),
                    ));
                }
            }
            Figure::Fig5 => {
                IsoChannel::new(self.family, a[0].min, a[1].min)
                    .and_then(|_| IsoChannel::new(self.family, a[0].max, a[1].max))
                    .map_err(|e| Error::InvalidSweep(e.to_string()))?;
            }
        }
        Ok(())
    }

    pub fn figure(&self) -> Figure {
        self.figure
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda3(&self) -> f64 {
        self.lambda3
    }

    pub fn filter(&self) -> &FilterCandidate {
        &self.filter
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Grid points in row-major order (first axis outermost).
    pub fn points(&self) -> Vec<Vec<f64>> {
        match self.axes.as_slice() {
            [x] => x.values().into_iter().map(|v| vec![v]).collect(),
            [x, y] => {
                let ys = y.values();
                x.values()
                    .into_iter()
                    .flat_map(|a| ys.iter().map(move |&b| vec![a, b]))
                    .collect()
            }
            _ => unreachable!("axes validated against figure dims"),
        }
    }
}

/// Evaluation settings shared by all figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub cap: u32,
    pub budget: usize,
    pub optimizer: OptimizerConfig,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            cap: measures::DEFAULT_CAP,
            budget: 1000,
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn fig1_row(l1: f64, l2: f64, l3: f64, cap: u32) -> Result<Vec<String>> {
    let order = if in_tetrahedron([l1, l2, l3], CONTRACTION_TOL) {
        let t = UnitalChannel::new(Matrix3::from_diagonal(&nalgebra::Vector3::new(l1, l2, l3)))?;
        measures::n_c(&t.into(), cap)?.label()
    } else {
        "not_cp".to_string()
    };
    Ok(vec![num(l1), num(l2), order])
}

fn fig4_value(p: f64, gamma: f64, f: &FilterCandidate, cfg: &OptimizerConfig) -> Result<f64> {
    let psi: Channel = channel::gad_kraus(&GadParams::new(p, gamma)?).into();
    let inner = amendable::apply_filter(f, &psi)?;
    let sandwich = channel::compose(&psi, &inner)?;
    measures::mu_c(&sandwich, cfg)
}

fn row(spec: &SweepSpec, s: &SweepSettings, x: &[f64]) -> Result<Vec<String>> {
    match spec.figure {
        Figure::Fig1 => fig1_row(x[0], x[1], spec.lambda3, s.cap),
        Figure::Fig2 => Ok(vec![
            num(x[0]),
            num(x[1]),
            gad::n_c_gad(x[0], x[1], s.cap)?.label(),
        ]),
        Figure::Fig2Inset => Ok(vec![
            num(x[0]),
            num(gad::mu_c_gad(x[0], spec.gamma)?),
            num(gad::mu_c_gad_squared(x[0], spec.gamma)?),
        ]),
        Figure::Fig3 => {
            let pt = amendable::gad_amendable_point(x[0], x[1], s.cap, s.budget)?;
            let kind = pt.filter.as_ref().map_or("none".to_string(), |f| f.label());
            Ok(vec![num(x[0]), num(x[1]), pt.amendable.to_string(), kind])
        }
        Figure::Fig4 => Ok(vec![
            num(x[0]),
            num(gad::mu_c_gad_squared(x[0], spec.gamma)?),
            num(fig4_value(x[0], spec.gamma, &spec.filter, &s.optimizer)?),
        ]),
        Figure::Fig5 => {
            let c = IsoChannel::new(spec.family, x[0], x[1])?;
            Ok(vec![
                num(x[0]),
                num(x[1]),
                spec.family.name().to_string(),
                gaussian::n_c_iso(&c, s.cap)?.label(),
            ])
        }
    }
}

/// Evaluates every grid point concurrently and assembles rows in grid order.
pub fn run(spec: &SweepSpec, settings: &SweepSettings) -> Result<Table> {
    let rows = spec
        .points()
        .par_iter()
        .map(|x| row(spec, settings, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        header: spec.figure.header().iter().map(|h| h.to_string()).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(fig: Figure, axes: Vec<Axis>, fixed: Fixed) -> SweepSpec {
        SweepSpec::new(fig, Some(axes), fixed, 2).unwrap()
    }

    #[test]
    fn axis_parsing_and_values() {
        let a: Axis = "0:1:5".parse().unwrap();
        assert_eq!(a.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!("0:1:1".parse::<Axis>().is_err());
        assert!("1:0:3".parse::<Axis>().is_err());
        assert!("0:1".parse::<Axis>().is_err());
        assert!("a:1:3".parse::<Axis>().is_err());
    }

    #[test]
    fn figure_names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("fig6".parse::<Figure>().is_err());
    }

    #[test]
    fn headers_are_exact() {
        let s = spec(
            Figure::Fig2,
            vec![Axis::new(0.0, 1.0, 2).unwrap(); 2],
            Fixed::default(),
        );
        let t = run(&s, &SweepSettings::default()).unwrap();
        assert!(t.to_csv().starts_with("p,gamma,n_c\n"));
        assert_eq!(t.rows.len(), 4);
    }

    #[test]
    fn row_major_order() {
        let s = spec(
            Figure::Fig2,
            vec![
                Axis::new(0.0, 1.0, 3).unwrap(),
                Axis::new(0.1, 0.2, 2).unwrap(),
            ],
            Fixed::default(),
        );
        let pts = s.points();
        assert_eq!(pts[0], vec![0.0, 0.1]);
        assert_eq!(pts[1], vec![0.0, 0.2]);
        assert_eq!(pts[2], vec![0.5, 0.1]);
    }

    #[test]
    fn fig1_example_point() {
        let r = fig1_row(0.3, 0.3, 0.5, 64).unwrap();
        assert_eq!(r, vec!["0.3", "0.3", "2"]);
        let r = fig1_row(1.0, 1.0, 0.5, 64).unwrap();
        assert_eq!(r[2], "not_cp");
        let r = fig1_row(0.2, 0.2, 0.5, 64).unwrap();
        assert_eq!(r[2], "1");
    }

    #[test]
    fn fig2_bands_are_monotone() {
        let s = spec(
            Figure::Fig2,
            vec![
                Axis::new(0.0, 1.0, 41).unwrap(),
                Axis::new(0.05, 0.95, 7).unwrap(),
            ],
            Fixed::default(),
        );
        let t = run(&s, &SweepSettings::default()).unwrap();
        for g in 0..7 {
            let col: Vec<u32> = (0..41)
                .map(|i| t.rows[i * 7 + g][2].parse().unwrap_or(u32::MAX))
                .collect();
            assert!(col.windows(2).all(|w| w[0] >= w[1]), "{col:?}");
        }
    }

    #[test]
    fn fig2_boundary_at_half() {
        let p1 = 2.0 * (2f64.sqrt() - 1.0);
        let below = row(
            &spec(
                Figure::Fig2,
                vec![Axis::new(0.0, 1.0, 2).unwrap(); 2],
                Fixed::default(),
            ),
            &SweepSettings::default(),
            &[p1 - 1e-6, 0.5],
        )
        .unwrap();
        assert_eq!(below[2], "2");
    }

    #[test]
    fn fig5_attenuation_boundary() {
        let s = spec(
            Figure::Fig5,
            vec![
                Axis::new(0.5, 0.6, 2).unwrap(),
                Axis::new(0.0, 1.0, 2).unwrap(),
            ],
            Fixed::default(),
        );
        let st = SweepSettings::default();
        assert_eq!(row(&s, &st, &[0.5, 0.25]).unwrap()[3], "1");
        assert_eq!(row(&s, &st, &[0.5, 0.2499]).unwrap()[3], "2");
    }

    #[test]
    fn domain_checks() {
        let bad = SweepSpec::new(
            Figure::Fig5,
            Some(vec![
                Axis::new(0.5, 1.5, 2).unwrap(),
                Axis::new(0.0, 1.0, 2).unwrap(),
            ]),
            Fixed::default(),
            2,
        );
        assert!(bad.is_err());
        let bad = SweepSpec::new(
            Figure::Fig1,
            None,
            Fixed {
                lambda3: Some(2.0),
                ..Fixed::default()
            },
            3,
        );
        assert!(bad.is_err());
        assert!(SweepSpec::new(Figure::Fig4, Some(vec![]), Fixed::default(), 2).is_err());
    }

    #[test]
    fn fig4_defaults_follow_filter() {
        let s = SweepSpec::new(
            Figure::Fig4,
            None,
            Fixed {
                filter: Some(FilterCandidate::R2R1),
                ..Fixed::default()
            },
            3,
        )
        .unwrap();
        assert_eq!(s.gamma(), 0.4);
        let s = SweepSpec::new(Figure::Fig4, None, Fixed::default(), 3).unwrap();
        assert_eq!((s.gamma(), s.filter().label()), (0.1, "s1".to_string()));
    }
}
