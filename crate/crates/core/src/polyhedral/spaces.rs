//! Presentations of H̃*(X_i) (or of a finite reduced cochain dga) for each coordinate space.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dga::{parity_sign, Accumulator, BasisElement, Combination, MonomialComplex};
use crate::error::{Error, Result};
use crate::linalg::{Coeff, CohomologyResult};

/// On-disk form, see [`SpacesFile`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub name: String,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub products: Vec<ProductSpec>,
    #[serde(default)]
    pub is_suspension: bool,
    #[serde(default)]
    pub differential: Vec<DifferentialSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub id: String,
    pub deg: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub id: String,
    pub coef: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpec {
    pub left: String,
    pub right: String,
    pub value: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSpec {
    pub source: String,
    pub value: Vec<TermSpec>,
}

/// `{"spaces": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacesFile {
    pub spaces: Vec<SpaceSpec>,
}

/// A validated presentation: reduced generators with positive degrees, structure constants
/// of the product on them, and an optional differential (total-degree derivation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub name: String,
    pub ids: Vec<String>,
    pub degrees: Vec<i32>,
    /// products[a][b] = a·b over generator indices.
    pub products: Vec<Vec<Combination>>,
    pub differential: Vec<Combination>,
    pub is_suspension: bool,
}

impl Space {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn has_differential(&self) -> bool {
        self.differential.iter().any(|d| !d.is_empty())
    }

    pub fn multiply(&self, x: &[(usize, i64)], y: &[(usize, i64)]) -> Combination {
        let mut acc = Accumulator::new();
        for &(a, u) in x {
            for &(b, v) in y {
                acc.add_all(&self.products[a][b], u * v);
            }
        }
        acc.finish()
    }

    pub fn apply_d(&self, x: &[(usize, i64)]) -> Combination {
        let mut acc = Accumulator::new();
        for &(a, u) in x {
            acc.add_all(&self.differential[a], u);
        }
        acc.finish()
    }

    /// H̃* of the presentation: the generators with their differential, products ignored.
    pub fn reduced_cohomology(&self, coeff: Coeff) -> Result<CohomologyResult> {
        let basis = self
            .ids
            .iter()
            .zip(&self.degrees)
            .map(|(id, &deg)| BasisElement::new(id.clone(), (0, deg), 0))
            .collect();
        MonomialComplex::new(self.name.clone(), basis, self.differential.clone(), false)?.cohomology(coeff)
    }

    /// S^n: one generator of degree n with square zero.
    pub fn sphere(n: i32) -> Space {
        Self::wedge_of_spheres(&format!("S{n}"), &[n])
    }

    /// ⋁ S^{n_j}: one generator per sphere, all products zero.
    pub fn wedge_of_spheres(name: &str, dims: &[i32]) -> Space {
        let spec = SpaceSpec {
            name: name.into(),
            generators: dims
                .iter()
                .enumerate()
                .map(|(j, &d)| GeneratorSpec {
                    id: generator_name(j),
                    deg: d,
                })
                .collect(),
            products: Vec::new(),
            is_suspension: true,
            differential: Vec::new(),
        };
        Space::from_spec(&spec).expect("wedges of spheres are valid")
    }

    /// A cochain-level model of S¹ with reduced generators x, y (degree 1), z (degree 2),
    /// dy = z and all products zero.
    pub fn circle_dga() -> Space {
        let spec = SpaceSpec {
            name: "S1_dga".into(),
            generators: vec![gen("x", 1), gen("y", 1), gen("z", 2)],
            products: Vec::new(),
            is_suspension: false,
            differential: vec![DifferentialSpec {
                source: "y".into(),
                value: vec![term("z", 1)],
            }],
        };
        Space::from_spec(&spec).expect("valid model")
    }

    /// Truncated polynomial ring on x of degree 2 with x² = y: H̃* of CP².
    pub fn cp2() -> Space {
        let spec = SpaceSpec {
            name: "CP2".into(),
            generators: vec![gen("x", 2), gen("y", 4)],
            products: vec![ProductSpec {
                left: "x".into(),
                right: "x".into(),
                value: vec![term("y", 1)],
            }],
            is_suspension: false,
            differential: Vec::new(),
        };
        Space::from_spec(&spec).expect("valid ring")
    }

    pub fn to_spec(&self) -> SpaceSpec {
        let terms = |c: &Combination| {
            c.iter()
                .map(|&(g, v)| TermSpec {
                    id: self.ids[g].clone(),
                    coef: v,
                })
                .collect()
        };
        let mut products = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if !self.products[a][b].is_empty() {
                    products.push(ProductSpec {
                        left: self.ids[a].clone(),
                        right: self.ids[b].clone(),
                        value: terms(&self.products[a][b]),
                    });
                }
            }
        }
        let differential = (0..self.len())
            .filter(|&a| !self.differential[a].is_empty())
            .map(|a| DifferentialSpec {
                source: self.ids[a].clone(),
                value: terms(&self.differential[a]),
            })
            .collect();
        SpaceSpec {
            name: self.name.clone(),
            generators: self
                .ids
                .iter()
                .zip(&self.degrees)
                .map(|(id, &deg)| GeneratorSpec { id: id.clone(), deg })
                .collect(),
            products,
            is_suspension: self.is_suspension,
            differential,
        }
    }

    /// Validates degrees, graded commutativity, associativity, the suspension flag and,
    /// when present, d² = 0 and the Leibniz rule.
    pub fn from_spec(spec: &SpaceSpec) -> Result<Space> {
        let bad = |msg: String| Error::input(format!("space {}: {msg}", spec.name));
        let n = spec.generators.len();
        let mut index = HashMap::new();
        for (j, g) in spec.generators.iter().enumerate() {
            if g.deg < 1 {
                return Err(bad(format!(
                    "generator {} has degree {} (must be positive)",
                    g.id, g.deg
                )));
            }
            if index.insert(g.id.clone(), j).is_some() {
                return Err(bad(format!("duplicate generator {}", g.id)));
            }
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| bad(format!("unknown generator {id}")))
        };
        let combination = |terms: &[TermSpec]| -> Result<Combination> {
            let mut acc = Accumulator::new();
            for t in terms {
                acc.add(lookup(&t.id)?, t.coef);
            }
            Ok(acc.finish())
        };
        let degrees: Vec<i32> = spec.generators.iter().map(|g| g.deg).collect();

        let mut products = vec![vec![Vec::new(); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for p in &spec.products {
            let (a, b) = (lookup(&p.left)?, lookup(&p.right)?);
            if std::mem::replace(&mut seen[a][b], true) {
                return Err(bad(format!("product {}·{} given twice", p.left, p.right)));
            }
            let value = combination(&p.value)?;
            if let Some(&(t, _)) = value.iter().find(|(t, _)| degrees[*t] != degrees[a] + degrees[b]) {
                return Err(bad(format!(
                    "{}·{} contains {} of degree {}, expected {}",
                    p.left,
                    p.right,
                    spec.generators[t].id,
                    degrees[t],
                    degrees[a] + degrees[b]
                )));
            }
            products[a][b] = value;
        }
        let mut differential = vec![Vec::new(); n];
        for d in &spec.differential {
            let a = lookup(&d.source)?;
            let value = combination(&d.value)?;
            if let Some(&(t, _)) = value.iter().find(|(t, _)| degrees[*t] != degrees[a] + 1) {
                return Err(bad(format!(
                    "d({}) contains {} of the wrong degree",
                    d.source, spec.generators[t].id
                )));
            }
            differential[a] = value;
        }
        let space = Space {
            name: spec.name.clone(),
            ids: spec.generators.iter().map(|g| g.id.clone()).collect(),
            degrees,
            products,
            differential,
            is_suspension: spec.is_suspension,
        };
        space.validate().map_err(bad)?;
        Ok(space)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let n = self.len();
        let id = |j: usize| self.ids[j].as_str();
        if self.is_suspension {
            if let Some((a, b)) = pairs(n).find(|&(a, b)| !self.products[a][b].is_empty()) {
                return Err(format!("flagged as a suspension but {}·{} is nonzero", id(a), id(b)));
            }
        }
        for (a, b) in pairs(n) {
            let sign = parity_sign(self.degrees[a] * self.degrees[b]);
            let swapped: Combination = self.products[b][a].iter().map(|&(t, v)| (t, v * sign)).collect();
            if self.products[a][b] != swapped {
                return Err(format!(
                    "{}·{} is not graded commutative with {}·{}",
                    id(a),
                    id(b),
                    id(b),
                    id(a)
                ));
            }
        }
        for (a, b) in pairs(n) {
            for c in 0..n {
                let left = self.multiply(&self.products[a][b], &[(c, 1)]);
                let right = self.multiply(&[(a, 1)], &self.products[b][c]);
                if left != right {
                    return Err(format!("associativity fails on ({}, {}, {})", id(a), id(b), id(c)));
                }
            }
        }
        for a in 0..n {
            if !self.apply_d(&self.differential[a]).is_empty() {
                return Err(format!("d(d({})) ≠ 0", id(a)));
            }
        }
        for (a, b) in pairs(n) {
            let lhs = self.apply_d(&self.products[a][b]);
            let mut rhs = Accumulator::new();
            rhs.add_all(&self.multiply(&self.differential[a], &[(b, 1)]), 1);
            rhs.add_all(
                &self.multiply(&[(a, 1)], &self.differential[b]),
                parity_sign(self.degrees[a]),
            );
            if lhs != rhs.finish() {
                return Err(format!("Leibniz fails on ({}, {})", id(a), id(b)));
            }
        }
        Ok(())
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn generator_name(j: usize) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    NAMES.get(j).map_or_else(|| format!("g{j}"), |s| s.to_string())
}

fn gen(id: &str, deg: i32) -> GeneratorSpec {
    GeneratorSpec { id: id.into(), deg }
}

fn term(id: &str, coef: i64) -> TermSpec {
    TermSpec { id: id.into(), coef }
}

pub fn load_spaces(json: &str) -> Result<Vec<Space>> {
    let file: SpacesFile = serde_json::from_str(json)?;
    file.spaces.iter().map(Space::from_spec).collect()
}

pub fn spaces_to_json(spaces: &[Space]) -> String {
    let file = SpacesFile {
        spaces: spaces.iter().map(Space::to_spec).collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

/// Named families of spaces for m coordinates:
/// `circles`, `spheres:n1,…,nm`, `wedge` (X₁ = S¹∨S², others S¹), `wedge11` (X₁ = S¹∨S¹),
/// `dga_circle` (X₁ the three-generator model of S¹) and `cp2` (X₁ = CP², not a suspension).
pub fn preset(name: &str, m: usize) -> Result<Vec<Space>> {
    let circles = |first: Space| {
        let mut v = vec![first];
        v.extend((1..m).map(|_| Space::sphere(1)));
        v
    };
    if m == 0 {
        return Ok(Vec::new());
    }
    match name {
        "circles" => Ok((0..m).map(|_| Space::sphere(1)).collect()),
        "wedge" => Ok(circles(Space::wedge_of_spheres("S1vS2", &[1, 2]))),
        "wedge11" => Ok(circles(Space::wedge_of_spheres("S1vS1", &[1, 1]))),
        "dga_circle" => Ok(circles(Space::circle_dga())),
        "cp2" => Ok(circles(Space::cp2())),
        _ => {
            let dims = name
                .strip_prefix("spheres:")
                .ok_or_else(|| Error::input(format!("unknown spaces preset {name:?}")))?;
            let dims: Vec<i32> = dims
                .split(',')
                .map(|d| d.trim().parse::<i32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::input(format!("bad sphere dimensions in {name:?}")))?;
            if dims.len() != m {
                return Err(Error::input(format!(
                    "{} sphere dimensions given for {m} vertices",
                    dims.len()
                )));
            }
            dims.iter()
                .map(|&n| {
                    if n < 1 {
                        Err(Error::input("sphere dimensions must be positive"))
                    } else {
                        Ok(Space::sphere(n))
                    }
                })
                .collect()
        }
    }
}
