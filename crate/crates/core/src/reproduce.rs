//! Reference values and the check battery run against the
//! bundled appendix panels.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{AxisKind, BinaryIncidence, IndexPanel, ValuedMatrix};
use crate::rca::rca;
use crate::reflections::{complexity_index, w_bipartite, Side};
use crate::spectral::{eigenvalues, EigenRule};
use crate::stats::{correlation_series, cross_section_correlate, lagged_correlate, Method, YearCorrelation};

pub const ECI_FILE: &str = "eci.csv";
pub const PATCI_FILE: &str = "patci.csv";
pub const THCI_FILE: &str = "thci.csv";

/// Year of the reference cross-sectional correlations.
pub const CROSS_SECTION_YEAR: i32 = 2014;
/// Entity whose series carry the reference lagged correlations.
pub const LAGGED_ENTITY: &str = "United States";

pub const CROSS_SECTION_TOL: f64 = 0.005;
pub const LAGGED_TOL: f64 = 0.02;
pub const ENDPOINT_TOL: f64 = 1e-12;
pub const SERIES_TOL: f64 = 1e-9;
pub const MICRO_TOL: f64 = 1e-12;

/// Reference 2014 Pearson coefficients: (first, second, value).
pub const CROSS_SECTION_TARGETS: [(Panel, Panel, f64); 3] = [
    (Panel::Eci, Panel::PatCi, 0.525),
    (Panel::Eci, Panel::Thci, 0.774),
    (Panel::Thci, Panel::PatCi, 0.375),
];

/// Reference Spearman coefficients of THCI(t) against ECI(t + lag), lags 0 to 4.
pub const LAGGED_ECI_TARGETS: [f64; 5] = [-0.011, -0.011, 0.582, 0.475, -0.027];
/// Same for PatCI.
pub const LAGGED_PATCI_TARGETS: [f64; 5] = [-0.424, 0.046, -0.121, 0.298, 0.114];

/// First year of the reference correlation series.
pub const SERIES_START: i32 = 2000;

/// Reference yearly Pearson coefficients, 2000 to 2014, computed
/// independently from the bundled panels. Pairs as in
/// [`CROSS_SECTION_TARGETS`].
pub const SERIES_REFERENCE: [[f64; 15]; 3] = [
    [
        0.3955365176945761,
        0.37528166684819936,
        0.33431347700645686,
        0.4329974620174653,
        0.41991592406082434,
        0.39803936720257554,
        0.16369331385784677,
        0.49321801734343457,
        0.5714412962906881,
        0.432408201589691,
        0.4987273617102043,
        0.4843271013549154,
        0.6565213390401035,
        0.4159328216144659,
        0.5249474366578202,
    ],
    [
        0.678413249756422,
        -0.05903978720212144,
        0.6568907219739806,
        0.7522865607232297,
        0.7976423910689919,
        -0.31859783745050774,
        0.6944590030489424,
        0.47712069032058096,
        0.7323064587557382,
        0.8710208487299426,
        0.833133425466277,
        0.7838419728314276,
        0.6239310278574164,
        0.8621558012202176,
        0.7738220602296192,
    ],
    [
        0.44895944224133993,
        -0.1652388371645834,
        0.5493655978730255,
        0.3910190315001021,
        0.5487081477845136,
        0.1140806083705538,
        0.4760146792153437,
        0.679463749259724,
        0.46144581361656406,
        0.4384100051489611,
        0.4914293134274135,
        0.5629146361517274,
        0.4024101291791211,
        0.42474532687510924,
        0.3745659579378978,
    ],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    Eci,
    PatCi,
    Thci,
}

impl fmt::Display for Panel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Panel::Eci => "ECI",
            Panel::PatCi => "PatCI",
            Panel::Thci => "THCI",
        })
    }
}

/// The three bundled entity by year panels.
#[derive(Debug, Clone, PartialEq)]
pub struct Appendix {
    pub eci: IndexPanel,
    pub patci: IndexPanel,
    pub thci: IndexPanel,
}

impl Appendix {
    pub fn panel(&self, p: Panel) -> &IndexPanel {
        match p {
            Panel::Eci => &self.eci,
            Panel::PatCi => &self.patci,
            Panel::Thci => &self.thci,
        }
    }

    pub fn panel_mut(&mut self, p: Panel) -> &mut IndexPanel {
        match p {
            Panel::Eci => &mut self.eci,
            Panel::PatCi => &mut self.patci,
            Panel::Thci => &mut self.thci,
        }
    }
}

pub fn load_appendix(dir: impl AsRef<Path>) -> Result<Appendix> {
    let dir = dir.as_ref();
    if !dir.is_dir() {
        return Err(Error::Io(format!("fixture directory {} not found", dir.display())));
    }
    Ok(Appendix {
        eci: crate::ingest::load_panel(dir.join(ECI_FILE), "ECI")?,
        patci: crate::ingest::load_panel(dir.join(PATCI_FILE), "PatCI")?,
        thci: crate::ingest::load_panel(dir.join(THCI_FILE), "THCI")?,
    })
}

/// One reproduced value compared with its target.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub target: f64,
    pub computed: Result<f64>,
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, target: f64, computed: Result<f64>, tolerance: f64) -> Self {
        Check { name: name.into(), target, computed, tolerance }
    }

    pub fn passed(&self) -> bool {
        matches!(self.computed, Ok(v) if (v - self.target).abs() <= self.tolerance)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        match &self.computed {
            Ok(v) => write!(
                f,
                "{status} {}: computed {v:.6} target {} tol {:e} diff {:+.3e}",
                self.name,
                self.target,
                self.tolerance,
                v - self.target
            ),
            Err(e) => write!(f, "{status} {}: target {} error: {e}", self.name, self.target),
        }
    }
}

fn pair_name(a: Panel, b: Panel) -> String {
    format!("{a}~{b}")
}

/// Cross-sectional Pearson coefficients for the reference 2014 values.
pub fn cross_section_checks(app: &Appendix) -> Vec<Check> {
    let panels = [&app.eci, &app.patci, &app.thci];
    let matrix = cross_section_correlate(&panels, CROSS_SECTION_YEAR, Method::Pearson);
    let idx = |p: Panel| match p {
        Panel::Eci => 0,
        Panel::PatCi => 1,
        Panel::Thci => 2,
    };
    CROSS_SECTION_TARGETS
        .iter()
        .map(|&(a, b, target)| {
            let computed = matrix.as_ref().map(|m| m[idx(a)][idx(b)].coefficient).map_err(Clone::clone);
            Check::new(
                format!("cross-section {CROSS_SECTION_YEAR} pearson {}", pair_name(a, b)),
                target,
                computed,
                CROSS_SECTION_TOL,
            )
        })
        .collect()
}

/// Spearman coefficients of the entity's THCI series leading ECI and PatCI.
pub fn lagged_checks(app: &Appendix) -> Vec<Check> {
    let mut out = Vec::new();
    let lead = app.thci.series(LAGGED_ENTITY);
    for (target_panel, targets) in [(Panel::Eci, LAGGED_ECI_TARGETS), (Panel::PatCi, LAGGED_PATCI_TARGETS)] {
        let follow = app.panel(target_panel).series(LAGGED_ENTITY);
        for (lag, &target) in targets.iter().enumerate() {
            let lag = lag as i32;
            let computed = match (&lead, &follow) {
                (Some(a), Some(b)) => lagged_correlate(a, b, Method::Spearman, lag).map(|r| r.coefficient),
                _ => Err(Error::InsufficientOverlap { needed: 3, found: 0 }),
            };
            out.push(Check::new(
                format!("{LAGGED_ENTITY} spearman THCI(t)~{target_panel}(t{lag:+})"),
                target,
                computed,
                LAGGED_TOL,
            ));
        }
    }
    out
}

/// Yearly coefficients for the three panel pairs, in the order of
/// [`CROSS_SECTION_TARGETS`].
pub fn fig_series(app: &Appendix, method: Method) -> Vec<(String, Vec<YearCorrelation>)> {
    CROSS_SECTION_TARGETS
        .iter()
        .map(|&(a, b, _)| (pair_name(a, b), correlation_series(app.panel(a), app.panel(b), method)))
        .collect()
}

/// The series endpoint must equal the cross-section value, and every
/// yearly coefficient must match the reference series.
pub fn series_checks(app: &Appendix) -> Vec<Check> {
    let mut out = Vec::new();
    let series = fig_series(app, Method::Pearson);
    let cross = cross_section_checks(app);
    let endpoint = |s: &[YearCorrelation]| {
        s.iter()
            .find(|y| y.year == CROSS_SECTION_YEAR)
            .ok_or(Error::UnknownYear(CROSS_SECTION_YEAR))
            .and_then(|y| y.report.clone())
            .map(|r| r.coefficient)
    };
    if let (Ok(table), Some((name, s))) = (&cross[0].computed, series.first()) {
        out.push(Check::new(
            format!("series endpoint {CROSS_SECTION_YEAR} {name} equals cross-section"),
            *table,
            endpoint(s),
            ENDPOINT_TOL,
        ));
    } else {
        out.push(Check::new(
            "series endpoint equals cross-section",
            f64::NAN,
            Err(Error::UnknownYear(CROSS_SECTION_YEAR)),
            ENDPOINT_TOL,
        ));
    }
    for ((name, s), reference) in series.iter().zip(SERIES_REFERENCE.iter()) {
        for (k, &target) in reference.iter().enumerate() {
            let year = SERIES_START + k as i32;
            let computed = s
                .iter()
                .find(|y| y.year == year)
                .ok_or(Error::UnknownYear(year))
                .and_then(|y| y.report.clone())
                .map(|r| r.coefficient);
            out.push(Check::new(format!("series {name} {year}"), target, computed, SERIES_TOL));
        }
    }
    out
}

fn max_abs_diff(got: impl IntoIterator<Item = f64>, want: &[f64]) -> Result<f64> {
    let got: Vec<f64> = got.into_iter().collect();
    if got.len() != want.len() {
        return Err(Error::LengthMismatch { left: got.len(), right: want.len() });
    }
    Ok(got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Small cases with hand-computed answers; each check reports the largest
/// deviation from the expected entries.
pub fn micro_checks() -> Vec<Check> {
    let cp = (AxisKind::Country, AxisKind::Product);
    let rca_case = ValuedMatrix::from_rows(&["a", "b"], &["p", "q"], &[vec![10.0, 0.0], vec![10.0, 10.0]], cp)
        .and_then(|x| rca(&x))
        .and_then(|r| max_abs_diff(r.values().transpose().iter().copied(), &[1.5, 0.0, 0.75, 1.5]));

    let two = BinaryIncidence::from_rows(&["a", "b"], &["p", "q"], &[vec![1, 1], vec![0, 1]], cp);
    let w_case = two
        .clone()
        .and_then(|m| max_abs_diff(w_bipartite(&m).values.transpose().iter().copied(), &[0.75, 0.25, 0.5, 0.5]));
    let eig_case = two.and_then(|m| {
        let mut ev: Vec<f64> = eigenvalues(&w_bipartite(&m).values)?.iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        max_abs_diff(ev, &[1.0, 0.25])
    });

    let block = BinaryIncidence::from_rows(
        &["a", "b", "c", "d"],
        &["p", "q", "r", "s"],
        &[vec![1, 1, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 1, 1]],
        cp,
    );
    let block_case = block
        .and_then(|m| complexity_index(&m, Side::Rows, EigenRule::SecondLargest))
        .and_then(|idx| max_abs_diff(idx.values().iter().copied(), &[1.0, 1.0, -1.0, -1.0]));

    vec![
        Check::new("micro rca 2x2 [[1.5,0],[0.75,1.5]]", 0.0, rca_case, 0.0),
        Check::new("micro W 2x2 [[3/4,1/4],[1/2,1/2]]", 0.0, w_case, 0.0),
        Check::new("micro W 2x2 eigenvalues {1, 1/4}", 0.0, eig_case, MICRO_TOL),
        Check::new("micro block index (+1,+1,-1,-1)", 0.0, block_case, MICRO_TOL),
    ]
}

/// Every check, in report order.
pub fn run_checks(app: &Appendix) -> Vec<Check> {
    let mut out = cross_section_checks(app);
    out.extend(lagged_checks(app));
    out.extend(series_checks(app));
    out.extend(micro_checks());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundled() -> Appendix {
        load_appendix(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/appendix")).unwrap()
    }

    #[test]
    fn clean_fixtures_pass() {
        let checks = run_checks(&bundled());
        for c in &checks {
            assert!(c.passed(), "{c}");
        }
        assert_eq!(checks.len(), 3 + 10 + 1 + 45 + 4);
    }

    #[test]
    fn perturbed_cell_fails_a_check() {
        let mut app = bundled();
        app.eci = app.eci.perturbed(0, 14, 1.0);
        let failed: Vec<String> = run_checks(&app).into_iter().filter(|c| !c.passed()).map(|c| c.name).collect();
        assert!(failed.iter().any(|n| n.contains("2014")), "{failed:?}");
    }

    #[test]
    fn missing_directory_is_io_error() {
        assert!(matches!(load_appendix("/nonexistent/appendix"), Err(Error::Io(_))));
    }

    #[test]
    fn display_reports_diff() {
        let c = Check::new("x", 1.0, Ok(1.5), 0.1);
        assert!(!c.passed());
        assert!(c.to_string().starts_with("FAIL x: computed 1.500000 target 1 tol 1e-1 diff +5.000e-1"));
        let e = Check::new("y", 1.0, Err(Error::ZeroVariance), 0.1);
        assert!(e.to_string().contains("error"));
    }
}
