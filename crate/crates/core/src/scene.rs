//! JSON scene files: a complex given by maximal simplices, a two-piece
//! decomposition, graded coefficients and optional named classes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::{MvContext, Piece};
use crate::diffcoh::DiffClass;
use crate::error::{Error, Result};
use crate::exactalg::rational::to_int_vec;
use crate::exactalg::{Int, Rat};
use crate::simplicial::{validate_decomposition, Cochain, CoeffRing, GradedCoefficients, Simplex, SimplicialComplex};

const BUNDLED: [(&str, &str); 6] = [
    ("point", include_str!("../scenes/point.json")),
    ("circle", include_str!("../scenes/circle.json")),
    ("sphere", include_str!("../scenes/sphere.json")),
    ("rp2", include_str!("../scenes/rp2.json")),
    ("torus", include_str!("../scenes/torus.json")),
    ("circle-torsion", include_str!("../scenes/circle-torsion.json")),
];

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_source(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn bundled(name: &str) -> Result<Scene> {
    let src = bundled_source(name).ok_or_else(|| Error::Scene(format!("no bundled scene named {name:?}")))?;
    Scene::parse(src)
}

/// A vertex label: a non-negative integer or a string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(u64),
    Str(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => write!(f, "{s}"),
        }
    }
}

/// An integer written as a JSON number or a decimal string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntValue {
    Num(i64),
    Str(String),
}

impl IntValue {
    fn parse(&self) -> Result<Int> {
        match self {
            IntValue::Num(n) => Ok(Int::from(*n)),
            IntValue::Str(s) => s.trim().parse().map_err(|_| Error::Scene(format!("{s:?} is not an integer"))),
        }
    }
}

/// A rational written as `"p/q"`, `"p"`, or a JSON integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatValue {
    Num(i64),
    Str(String),
}

impl RatValue {
    fn parse(&self) -> Result<Rat> {
        match self {
            RatValue::Num(n) => Ok(Rat::from_integer(Int::from(*n))),
            RatValue::Str(s) => parse_rat(s),
        }
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Scene(format!("{s:?} is not a rational of the form p/q"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim().parse::<Int>().map_err(|_| bad())?, q.trim().parse::<Int>().map_err(|_| bad())?),
        None => (s.trim().parse::<Int>().map_err(|_| bad())?, Int::from(1)),
    };
    if q == Int::from(0) {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<Label>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Label>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub degree: i64,
    #[serde(default)]
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<IntValue>,
}

/// A differential class `(c, h)` on one piece; missing simplices are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassFile {
    #[serde(default = "default_piece")]
    pub on: String,
    pub degree: i64,
    #[serde(default)]
    pub integer: BTreeMap<String, Vec<IntValue>>,
    #[serde(default)]
    pub rational: BTreeMap<String, Vec<RatValue>>,
}

fn default_piece() -> String {
    "X".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub complex: Vec<Vec<Label>>,
    pub decomposition: DecompositionFile,
    pub coefficients: Vec<CoefficientFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub classes: BTreeMap<String, ClassFile>,
}

/// A validated scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub file: SceneFile,
    pub ctx: Arc<MvContext>,
    labels: BTreeMap<Label, usize>,
    classes: BTreeMap<String, (Piece, DiffClass)>,
}

fn parse_piece(s: &str) -> Result<Piece> {
    match s {
        "X" => Ok(Piece::X),
        "A" => Ok(Piece::A),
        "B" => Ok(Piece::B),
        "D" => Ok(Piece::D),
        _ => Err(Error::Scene(format!("unknown piece {s:?}, expected X, A, B or D"))),
    }
}

/// Vertex indices: integer labels are used as they are, string labels are
/// numbered in sorted order.
fn label_table(file: &SceneFile) -> Result<BTreeMap<Label, usize>> {
    let mut all: Vec<&Label> = file.complex.iter().flatten().collect();
    all.sort();
    all.dedup();
    let ints = all.iter().filter(|l| matches!(l, Label::Int(_))).count();
    if ints != 0 && ints != all.len() {
        return Err(Error::Scene("vertex labels mix integers and strings".into()));
    }
    Ok(all
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            let idx = match l {
                Label::Int(n) => *n as usize,
                Label::Str(_) => i,
            };
            (l.clone(), idx)
        })
        .collect())
}

impl Scene {
    pub fn load(path: &Path) -> Result<Scene> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Scene(format!("{}: {e}", path.display())))?;
        Scene::parse(&src).map_err(|e| match e {
            Error::Scene(m) => Error::Scene(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(src: &str) -> Result<Scene> {
        let file: SceneFile = serde_json::from_str(src)
            .map_err(|e| Error::Scene(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Scene::from_file(file)
    }

    pub fn from_file(file: SceneFile) -> Result<Scene> {
        let labels = label_table(&file)?;
        let to_simplex = |s: &[Label], what: &str| -> Result<Simplex> {
            let mut v: Simplex = s
                .iter()
                .map(|l| labels.get(l).copied().ok_or_else(|| Error::Scene(format!("{what}: unknown vertex {l}"))))
                .collect::<Result<_>>()?;
            v.sort_unstable();
            let n = v.len();
            v.dedup();
            if v.len() != n || n == 0 {
                return Err(Error::Scene(format!("{what}: simplex must list distinct vertices")));
            }
            Ok(v)
        };
        let complex: Vec<Simplex> = file.complex.iter().map(|s| to_simplex(s, "complex")).collect::<Result<_>>()?;
        let a: Vec<Simplex> = file.decomposition.a.iter().map(|s| to_simplex(s, "A")).collect::<Result<_>>()?;
        let b: Vec<Simplex> = file.decomposition.b.iter().map(|s| to_simplex(s, "B")).collect::<Result<_>>()?;
        let x = SimplicialComplex::from_simplices(&complex);
        let dec = validate_decomposition(&x, &a, &b)?;
        let parts: Vec<(i64, usize, Vec<Int>)> = file
            .coefficients
            .iter()
            .map(|c| Ok((c.degree, c.rank, c.torsion.iter().map(IntValue::parse).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<_>>()?;
        let coeffs = GradedCoefficients::from_parts(&parts)?;
        let ctx = Arc::new(MvContext::new(dec, coeffs));

        let mut classes = BTreeMap::new();
        for (name, c) in &file.classes {
            let piece = parse_piece(&c.on)?;
            let space = ctx.space(piece).clone();
            let cc = space.cochains();
            let simplex_key = |key: &str| -> Result<Simplex> {
                let trimmed = key.trim().trim_start_matches('[').trim_end_matches(']');
                let ls: Vec<Label> = trimmed
                    .split(',')
                    .map(|t| {
                        let t = t.trim();
                        t.parse::<u64>().map(Label::Int).unwrap_or_else(|_| Label::Str(t.to_string()))
                    })
                    .collect();
                to_simplex(&ls, &format!("class {name}"))
            };
            let mut int_map = BTreeMap::new();
            for (k, vals) in &c.integer {
                let vals: Vec<Rat> = vals.iter().map(|v| v.parse().map(Rat::from_integer)).collect::<Result<_>>()?;
                int_map.insert(simplex_key(k)?, vals);
            }
            let mut rat_map = BTreeMap::new();
            for (k, vals) in &c.rational {
                rat_map.insert(simplex_key(k)?, vals.iter().map(RatValue::parse).collect::<Result<Vec<_>>>()?);
            }
            let ctx_err = |e: Error| Error::Scene(format!("class {name}: {e}"));
            let ci = Cochain::from_simplex_map(cc, c.degree, CoeffRing::Int, &int_map).map_err(ctx_err)?;
            let hr = Cochain::from_simplex_map(cc, c.degree - 1, CoeffRing::Rat, &rat_map).map_err(ctx_err)?;
            let ints = to_int_vec(ci.values()).expect("integral cochain");
            let f = DiffClass::new(&space, c.degree, ints, hr.values().to_vec()).map_err(ctx_err)?;
            classes.insert(name.clone(), (piece, f));
        }
        Ok(Scene { file, ctx, labels, classes })
    }

    pub fn name(&self) -> Option<&str> {
        self.file.name.as_deref()
    }

    pub fn class(&self, name: &str) -> Result<&(Piece, DiffClass)> {
        self.classes.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.classes.keys().map(String::as_str).collect();
            Error::Scene(format!("no class named {name:?} (known: {})", known.join(", ")))
        })
    }

    pub fn class_names(&self) -> Vec<&str> {
        self.classes.keys().map(String::as_str).collect()
    }

    fn label_of(&self, v: usize) -> Label {
        self.labels.iter().find(|(_, &i)| i == v).map(|(l, _)| l.clone()).expect("vertex has a label")
    }

    fn key_of(&self, s: &Simplex) -> String {
        s.iter().map(|&v| self.label_of(v).to_string()).collect::<Vec<_>>().join(",")
    }

    /// File form of a class on `piece`, listing only nonzero simplices.
    pub fn class_file(&self, piece: Piece, f: &DiffClass) -> Result<ClassFile> {
        let cc = self.ctx.space(piece).cochains();
        let c = Cochain::from_ints(cc, f.degree, &f.c)?;
        let h = Cochain::new(cc, f.degree - 1, CoeffRing::Rat, f.h.clone())?;
        let integer = c
            .to_simplex_map()
            .into_iter()
            .map(|(s, v)| (self.key_of(&s), v.iter().map(|x| int_value(&x.to_integer())).collect()))
            .collect();
        let rational = h
            .to_simplex_map()
            .into_iter()
            .map(|(s, v)| (self.key_of(&s), v.iter().map(|x| RatValue::Str(format_rat(x))).collect()))
            .collect();
        Ok(ClassFile { on: piece.to_string(), degree: f.degree, integer, rational })
    }

    /// The scene file with one more named class, as pretty JSON.
    pub fn with_class(&self, name: &str, piece: Piece, f: &DiffClass) -> Result<String> {
        let mut file = self.file.clone();
        file.classes.insert(name.to_string(), self.class_file(piece, f)?);
        Ok(serde_json::to_string_pretty(&file).expect("scene serializes") + "\n")
    }
}

fn int_value(x: &Int) -> IntValue {
    match i64::try_from(x) {
        Ok(n) => IntValue::Num(n),
        Err(_) => IntValue::Str(x.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcoh::diff_equal;
    use crate::gluing::Gluing;
    use num_traits::Signed;

    #[test]
    fn bundled_scenes_parse() {
        for name in bundled_names() {
            let s = bundled(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.name(), Some(name));
        }
    }

    #[test]
    fn bundled_pairs_glue() {
        for (scene, fa, fb, chern) in [("sphere", "monoA", "monoB", 1), ("circle", "jumpA", "zeroB", 1)] {
            let s = bundled(scene).unwrap();
            let (_, a) = s.class(fa).unwrap();
            let (_, b) = s.class(fb).unwrap();
            let g = Gluing::new(s.ctx.clone(), a.degree).unwrap();
            let (glued, cert) = g.glue(a, b).unwrap();
            assert!(cert.verified(), "{scene}");
            let ch = glued.characteristic_coords();
            assert_eq!(ch.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![Int::from(chern)], "{scene}");
        }
    }

    #[test]
    fn cover_failure_names_simplex() {
        let src = r#"{"complex": [[0,1],[1,2],[0,2]], "decomposition": {"A": [[0,1]], "B": [[0,2]]},
                      "coefficients": [{"degree": 0, "rank": 1}]}"#;
        let err = Scene::parse(src).unwrap_err().to_string();
        assert!(err.contains("[1,2]"), "{err}");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = Scene::parse("{\"complex\": [[0,1]],\n  oops}").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn non_cocycle_class_rejected() {
        let src = r#"{"complex": [[0,1],[1,2],[0,2]], "decomposition": {"A": [[0,1],[1,2]], "B": [[0,2]]},
                      "coefficients": [{"degree": 0, "rank": 1}],
                      "classes": {"bad": {"on": "X", "degree": 0, "integer": {"0": [1]}}}}"#;
        let err = Scene::parse(src).unwrap_err().to_string();
        assert!(err.contains("class bad"), "{err}");
    }

    #[test]
    fn string_labels_and_round_trip() {
        let src = r#"{"complex": [["a","b"],["b","c"],["a","c"]],
                      "decomposition": {"A": [["a","b"],["b","c"]], "B": [["a","c"]]},
                      "coefficients": [{"degree": 0, "rank": 1}],
                      "classes": {"f": {"on": "A", "degree": 1, "rational": {"a": ["1/2"], "c": ["-3"]}}}}"#;
        let s = Scene::parse(src).unwrap();
        let (piece, f) = s.class("f").unwrap().clone();
        let text = s.with_class("g", piece, &f).unwrap();
        let back = Scene::parse(&text).unwrap();
        let (_, g) = back.class("g").unwrap();
        let f2 = DiffClass { space: g.space.clone(), ..f };
        assert!(diff_equal(&f2, g));
        assert_eq!(parse_rat(" -6/4 ").unwrap(), Rat::new(Int::from(-3), Int::from(2)));
        assert!(parse_rat("1/0").is_err());
    }
}
