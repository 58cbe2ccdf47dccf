//! User-defined models from JSON config files.
//!
//! ```json
//! {
//!   "name": "example",
//!   "coordinates": ["x", "y", "z"],
//!   "params": {"eta": 0.3},
//!   "bivector": [[0, 1, "z"], [1, 2, "x"]],
//!   "guard": "x^2 + y^2 + z^2",
//!   "algebra": {"standard": "so3"},
//!   "delta": [[[1, 2, 1.0]], [], []],
//!   "group": {"identity": [0, 0, 0], "multiply": ["x + x'", "y + y'", "z + z'"],
//!             "inverse": ["-x", "-y", "-z"], "basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]},
//!   "hamiltonians": {"H": "x^2/2 + y^2"},
//!   "casimirs": {"C": "x^2 + y^2 + z^2"},
//!   "sample_box": {"center": [0, 0, 0], "half_width": 1.0, "accept": "1 - x^2"},
//!   "x0": [0.1, 0.2, 0.3]
//! }
//! ```
//!
//! `bivector` lists the nonzero upper entries `Π^{ij}`; `guard` and `accept`
//! admit a point when the expression is positive. `algebra` is either
//! `{"standard": name, "params": [...]}` or an explicit
//! `{"dim", "labels", "brackets"}` table. The cobracket comes from `"r"`
//! (entries `[i, j, c]` of `r`) or `"delta"` (per generator, entries of
//! `δ(e_k)`); when both are given they must agree. `basis` lists the algebra
//! basis vectors in chart coordinates, one per inner array. In `group`,
//! primed names refer to the second factor.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::bialgebra::{Cobracket, LieBialgebra};
use crate::chart::PoissonChart;
use crate::error::{PlgError, Result};
use crate::expr::Expr;
use crate::field::{unguarded, Guard, ScalarField};
use crate::group::GroupModel;
use crate::lie::{standard_algebra, AlgebraSpec, LieAlgebra, Multivector};
use crate::models::{GroundTruth, Hamiltonian, ModelBundle, NamedFunction, Structure};
use crate::sampling::{SampleBox, DEFAULT_SEED};

/// Points used by the invariant checks run on every loaded config.
pub const CONFIG_VALIDATION_SAMPLES: usize = 100;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelConfig {
    name: Option<String>,
    coordinates: Vec<String>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    bivector: Vec<(usize, usize, String)>,
    guard: Option<String>,
    algebra: Option<AlgebraConfig>,
    r: Option<Vec<(usize, usize, f64)>>,
    delta: Option<Vec<Vec<(usize, usize, f64)>>>,
    group: Option<GroupConfig>,
    #[serde(default)]
    hamiltonians: BTreeMap<String, String>,
    #[serde(default)]
    casimirs: BTreeMap<String, String>,
    sample_box: Option<SampleBoxConfig>,
    x0: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AlgebraConfig {
    Standard {
        standard: String,
        #[serde(default)]
        params: Vec<f64>,
    },
    Table(AlgebraSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupConfig {
    identity: Vec<f64>,
    multiply: Vec<String>,
    inverse: Vec<String>,
    basis: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleBoxConfig {
    center: Option<Vec<f64>>,
    half_width: Option<f64>,
    lo: Option<Vec<f64>>,
    hi: Option<Vec<f64>>,
    accept: Option<String>,
}

/// Loads, builds and validates the model in `path`.
pub fn from_config(path: impl AsRef<Path>) -> Result<ModelBundle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    from_config_str(&text, &path.display().to_string())
}

/// [`from_config`] on config text; `source` names the text in errors.
pub fn from_config_str(text: &str, source: &str) -> Result<ModelBundle> {
    let bundle = parse_config(text, source)?;
    bundle.ensure_valid(DEFAULT_SEED, CONFIG_VALIDATION_SAMPLES)?;
    Ok(bundle)
}

/// Builds the bundle without running the invariant checks.
pub fn parse_config(text: &str, source: &str) -> Result<ModelBundle> {
    let cfg: ModelConfig = serde_json::from_str(text).map_err(|e| PlgError::Parse {
        context: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Builder { text, source, cfg: &cfg }.build()
}

struct Builder<'a> {
    text: &'a str,
    source: &'a str,
    cfg: &'a ModelConfig,
}

impl Builder<'_> {
    fn dim(&self) -> usize {
        self.cfg.coordinates.len()
    }

    /// Parses `src`; on failure, points at the string inside the config text
    /// when it can be found there.
    fn expr(&self, what: &str, src: &str, vars: &[String]) -> Result<Expr> {
        Expr::parse(src, vars, &self.cfg.params).map_err(|e| {
            let (line, column) = locate(self.text, src, e.column).unwrap_or((1, e.column));
            PlgError::Parse {
                context: format!("{} ({what})", self.source),
                line,
                column,
                message: e.message,
            }
        })
    }

    fn scalar(&self, what: &str, src: &str) -> Result<ScalarField> {
        let n = self.dim();
        let e = Arc::new(self.expr(what, src, &self.cfg.coordinates)?);
        let grad = Arc::new(e.gradient(n));
        Ok(ScalarField::new({
            let e = Arc::clone(&e);
            move |x| e.eval(x)
        })
        .with_gradient(move |x| grad.iter().map(|d| d.eval(x)).collect()))
    }

    fn positive(&self, what: &str, src: &Option<String>) -> Result<Guard> {
        match src {
            None => Ok(unguarded()),
            Some(s) => {
                let e = self.expr(what, s, &self.cfg.coordinates)?;
                Ok(Arc::new(move |x: &[f64]| e.eval(x) > 0.0))
            }
        }
    }

    fn chart(&self, name: &str, guard: Guard) -> Result<PoissonChart> {
        let n = self.dim();
        let mut entries = Vec::new();
        let mut seen = vec![false; n * n];
        for (i, j, src) in &self.cfg.bivector {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || i == j {
                return Err(PlgError::Invalid(format!(
                    "bivector entry ({i}, {j}) is not an off-diagonal index pair below {n}"
                )));
            }
            if seen[i * n + j] || seen[j * n + i] {
                return Err(PlgError::Invalid(format!("bivector entry ({i}, {j}) given twice")));
            }
            seen[i * n + j] = true;
            entries.push((i, j, self.expr(&format!("bivector ({i}, {j})"), src, &self.cfg.coordinates)?));
        }
        Ok(PoissonChart::new(name, n, move |x| {
            let mut m = DMatrix::zeros(n, n);
            for (i, j, e) in &entries {
                let v = e.eval(x);
                m[(*i, *j)] = v;
                m[(*j, *i)] = -v;
            }
            m
        })
        .with_guard(guard))
    }

    fn algebra(&self) -> Result<Option<LieAlgebra>> {
        let alg = match &self.cfg.algebra {
            None => return Ok(None),
            Some(AlgebraConfig::Standard { standard, params }) => standard_algebra(standard, params)?,
            Some(AlgebraConfig::Table(spec)) => spec.build()?,
        };
        if alg.dim() != self.dim() {
            return Err(PlgError::DimensionMismatch {
                expected: self.dim(),
                got: alg.dim(),
            });
        }
        Ok(Some(alg))
    }

    fn bialgebra(&self) -> Result<Option<LieBialgebra>> {
        let Some(alg) = self.algebra()? else {
            if self.cfg.r.is_some() || self.cfg.delta.is_some() {
                return Err(PlgError::Invalid("`r` and `delta` need an `algebra`".into()));
            }
            return Ok(None);
        };
        let n = alg.dim();
        let from_r = match &self.cfg.r {
            Some(r) => Some(Cobracket::from_r(&alg, &Multivector::bivector(n, r)?)?),
            None => None,
        };
        let from_delta = match &self.cfg.delta {
            Some(d) => {
                if d.len() != n {
                    return Err(PlgError::DimensionMismatch {
                        expected: n,
                        got: d.len(),
                    });
                }
                let comps = d
                    .iter()
                    .map(|terms| Multivector::bivector(n, terms))
                    .collect::<Result<Vec<_>>>()?;
                Some(Cobracket::from_components(alg.clone(), comps)?)
            }
            None => None,
        };
        let cob = match (from_r, from_delta) {
            (None, None) => return Ok(None),
            (Some(a), Some(b)) => {
                let worst = a
                    .components()
                    .iter()
                    .zip(b.components())
                    .map(|(x, y)| {
                        let mut d = x.clone();
                        d.add_scaled(y, -1.0);
                        d.max_abs()
                    })
                    .fold(0.0, f64::max);
                if worst > crate::fd::EXACT_TOL {
                    return Err(PlgError::Validation {
                        check: "r vs delta".into(),
                        residual: worst,
                        tol: crate::fd::EXACT_TOL,
                    });
                }
                b
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
        };
        let mut b = LieBialgebra::new(cob)?;
        if let Some(r) = &self.cfg.r {
            b = LieBialgebra::from_r(b.primal(), Multivector::bivector(n, r)?)?;
        }
        Ok(Some(b))
    }

    fn group(&self, name: &str, guard: Guard) -> Result<Option<GroupModel>> {
        let Some(g) = &self.cfg.group else {
            return Ok(None);
        };
        let n = self.dim();
        for (what, len) in [
            ("identity", g.identity.len()),
            ("multiply", g.multiply.len()),
            ("inverse", g.inverse.len()),
        ] {
            if len != n {
                return Err(PlgError::Invalid(format!("group {what} has {len} entries, expected {n}")));
            }
        }
        let mut both = self.cfg.coordinates.clone();
        both.extend(self.cfg.coordinates.iter().map(|c| format!("{c}'")));
        let mul = g
            .multiply
            .iter()
            .enumerate()
            .map(|(i, s)| self.expr(&format!("group multiply {i}"), s, &both))
            .collect::<Result<Vec<_>>>()?;
        let inv = g
            .inverse
            .iter()
            .enumerate()
            .map(|(i, s)| self.expr(&format!("group inverse {i}"), s, &self.cfg.coordinates))
            .collect::<Result<Vec<_>>>()?;
        // d/dh (g h) at h = e, and d/dg (g h) at g = e.
        let dl: Vec<Vec<Expr>> = mul.iter().map(|e| (n..2 * n).map(|j| e.derivative(j)).collect()).collect();
        let dr: Vec<Vec<Expr>> = mul.iter().map(|e| (0..n).map(|j| e.derivative(j)).collect()).collect();
        let id = g.identity.clone();
        let (id_l, id_r) = (id.clone(), id.clone());
        let mul = Arc::new(mul);
        let mut model = GroupModel::new(
            name,
            id,
            move |a, b| {
                let ab: Vec<f64> = a.iter().chain(b).copied().collect();
                mul.iter().map(|e| e.eval(&ab)).collect()
            },
            move |a| inv.iter().map(|e| e.eval(a)).collect(),
        )
        .with_guard(guard)
        .with_left_jacobian(move |a| {
            let ab: Vec<f64> = a.iter().chain(&id_l).copied().collect();
            DMatrix::from_fn(n, n, |i, j| dl[i][j].eval(&ab))
        })
        .with_right_jacobian(move |b| {
            let ab: Vec<f64> = id_r.iter().chain(b).copied().collect();
            DMatrix::from_fn(n, n, |i, j| dr[i][j].eval(&ab))
        });
        if let Some(cols) = &g.basis {
            if cols.len() != n || cols.iter().any(|c| c.len() != n) {
                return Err(PlgError::Invalid(format!("group basis must be {n} vectors of length {n}")));
            }
            let flat: Vec<f64> = cols.iter().flatten().copied().collect();
            model = model.with_basis(DMatrix::from_column_slice(n, n, &flat))?;
        }
        Ok(Some(model))
    }

    fn sample_box(&self, center: &[f64]) -> Result<SampleBox> {
        let n = self.dim();
        let Some(sb) = &self.cfg.sample_box else {
            return Ok(SampleBox::around(center, 1.0));
        };
        let mut bx = match (&sb.lo, &sb.hi) {
            (Some(lo), Some(hi)) => SampleBox {
                lo: lo.clone(),
                hi: hi.clone(),
                accept: unguarded(),
            },
            (None, None) => SampleBox::around(sb.center.as_deref().unwrap_or(center), sb.half_width.unwrap_or(1.0)),
            _ => return Err(PlgError::Invalid("sample_box needs both `lo` and `hi`".into())),
        };
        if bx.lo.len() != n || bx.hi.len() != n {
            return Err(PlgError::DimensionMismatch {
                expected: n,
                got: bx.lo.len().min(bx.hi.len()),
            });
        }
        if bx.lo.iter().zip(&bx.hi).any(|(a, b)| a >= b) {
            return Err(PlgError::Invalid("sample_box has an empty side".into()));
        }
        if sb.accept.is_some() {
            bx = bx.with_accept(self.positive("sample_box accept", &sb.accept)?);
        }
        Ok(bx)
    }

    fn build(&self) -> Result<ModelBundle> {
        let cfg = self.cfg;
        let n = self.dim();
        if n == 0 {
            return Err(PlgError::Invalid("config declares no coordinates".into()));
        }
        for (i, c) in cfg.coordinates.iter().enumerate() {
            if cfg.coordinates[..i].contains(c) {
                return Err(PlgError::Invalid(format!("coordinate `{c}` declared twice")));
            }
        }
        let name = cfg.name.clone().unwrap_or_else(|| {
            Path::new(self.source)
                .file_stem()
                .map_or_else(|| "config".to_string(), |s| s.to_string_lossy().into_owned())
        });
        let guard = self.positive("guard", &cfg.guard)?;
        let chart = self.chart(&name, Arc::clone(&guard))?;
        let bialgebra = self.bialgebra()?;
        let group = self.group(&name, guard)?;

        let hamiltonians = cfg
            .hamiltonians
            .iter()
            .map(|(k, v)| {
                Ok(Hamiltonian {
                    name: k.clone(),
                    field: self.scalar(&format!("hamiltonian {k}"), v)?,
                    structure: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let casimirs = cfg
            .casimirs
            .iter()
            .map(|(k, v)| {
                Ok(NamedFunction {
                    name: k.clone(),
                    field: self.scalar(&format!("casimir {k}"), v)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let center = group.as_ref().map_or_else(|| vec![0.0; n], |g| g.identity().to_vec());
        let sample_box = self.sample_box(&center)?;
        let default_x0 = match &cfg.x0 {
            Some(x) if x.len() != n => {
                return Err(PlgError::DimensionMismatch {
                    expected: n,
                    got: x.len(),
                })
            }
            Some(x) => x.clone(),
            None => center,
        };

        Ok(ModelBundle {
            id: name.clone(),
            group,
            structures: vec![Structure {
                name,
                chart,
                bialgebra,
            }],
            hamiltonians,
            casimirs,
            ground_truth: GroundTruth::default(),
            sample_box,
            default_x0,
        })
    }
}

/// Line and column in `text` of character `column` (1-based) of the JSON
/// string literal whose content is `src`.
fn locate(text: &str, src: &str, column: usize) -> Option<(usize, usize)> {
    let needle = format!("\"{src}\"");
    let start = text.find(&needle)? + 1;
    let offset = src.char_indices().nth(column.saturating_sub(1)).map_or(src.len(), |(i, _)| i);
    let before = &text[..start + offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Some((line, col))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROTATION: &str = r#"{
        "name": "rigid",
        "coordinates": ["x", "y", "z"],
        "bivector": [[0, 1, "z"], [0, 2, "-y"], [1, 2, "x"]],
        "algebra": {"standard": "so3"},
        "group": {"identity": [0, 0, 0], "multiply": ["x + x'", "y + y'", "z + z'"],
                  "inverse": ["-x", "-y", "-z"]},
        "hamiltonians": {"H": "x^2/2 + y^2 + 3*z^2/2"},
        "casimirs": {"C": "x^2 + y^2 + z^2"}
    }"#;

    #[test]
    fn rigid_body_parses_without_cobracket() {
        let m = parse_config(ROTATION, "inline").unwrap();
        assert_eq!(m.id, "rigid");
        assert!(m.bialgebra().is_none());
        let checks = m.validate(1, 20).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let h = &m.hamiltonian("H").unwrap().field;
        assert!(h.gradient_mismatch(&m.sample(2, 5).unwrap()) < 1e-8);
    }

    #[test]
    fn empty_brackets_give_abelian_chart() {
        let m = from_config_str(r#"{"coordinates": ["p", "q"]}"#, "abelian.json").unwrap();
        assert_eq!(m.id, "abelian");
        assert_eq!(m.chart().pi(&[0.3, 0.4]).unwrap(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn expression_errors_point_into_the_file() {
        let text = "{\n  \"coordinates\": [\"x\", \"y\"],\n  \"bivector\": [[0, 1, \"x * * y\"]]\n}";
        match parse_config(text, "bad.json") {
            Err(PlgError::Parse { line, column, context, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 28);
                assert!(context.contains("bivector"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_errors_carry_position() {
        match parse_config("{\n \"coordinates\": [\"x\",]\n}", "bad.json") {
            Err(PlgError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config(r#"{"coordinates": ["x"], "colour": 1}"#, "x"),
            Err(PlgError::Parse { .. })
        ));
    }

    #[test]
    fn r_and_delta_must_agree() {
        let base = r#""coordinates": ["a", "b"],
            "algebra": {"dim": 2, "brackets": [{"a": 0, "b": 1, "out": [0, 1]}]},
            "r": [[0, 1, 1.0]]"#;
        // δ(ξ) = ad_ξ r: δ(e1) = e1 ^ e2, δ(e2) = 0.
        let good = format!("{{{base}, \"delta\": [[[0, 1, 1.0]], []]}}");
        let bad = format!("{{{base}, \"delta\": [[[0, 1, 2.0]], []]}}");
        let b = parse_config(&good, "x").unwrap();
        assert!(b.bialgebra().unwrap().r().is_some());
        assert!(matches!(parse_config(&bad, "x"), Err(PlgError::Validation { .. })));
    }

    #[test]
    fn bad_entries_rejected() {
        for text in [
            r#"{"coordinates": ["x", "y"], "bivector": [[0, 0, "x"]]}"#,
            r#"{"coordinates": ["x", "y"], "bivector": [[0, 1, "x"], [1, 0, "y"]]}"#,
            r#"{"coordinates": ["x", "x"]}"#,
            r#"{"coordinates": ["x"], "x0": [1, 2]}"#,
            r#"{"coordinates": ["x"], "r": [[0, 0, 1]]}"#,
        ] {
            assert!(parse_config(text, "x").is_err(), "{text}");
        }
    }

    #[test]
    fn symbolic_group_jacobians_match_fd() {
        let text = r#"{
            "coordinates": ["x", "y"],
            "params": {"eta": 0.4},
            "group": {"identity": [0, 0], "multiply": ["x + x'", "y + y' * exp(-eta * x)"],
                      "inverse": ["-x", "-y * exp(eta * x)"]}
        }"#;
        let m = parse_config(text, "x").unwrap();
        let gm = m.group.as_ref().unwrap();
        let fd_gm = gm.clone().without_analytic_jacobians();
        for side in [crate::group::Side::Left, crate::group::Side::Right] {
            let a = gm.translation_jacobian(&[0.3, -0.7], side).unwrap();
            let b = fd_gm.translation_jacobian(&[0.3, -0.7], side).unwrap();
            assert!((a - b).amax() < 1e-9);
        }
        let alg = LieAlgebra::from_brackets(&["X", "Y"], &[(0, 1, vec![0.0, -0.4])]).unwrap();
        assert!(gm.algebra_mismatch(&alg).unwrap() < 1e-8);
    }
}
