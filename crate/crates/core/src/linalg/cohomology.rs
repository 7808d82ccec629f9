//! Graded cohomology groups: free rank plus torsion invariant factors per degree.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::is_prime;
use super::integer::normalize_torsion;
use crate::error::{Error, Result};

/// Coefficient ring selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coeff {
    Z,
    Q,
    Zp(u64),
}

impl Coeff {
    pub fn zp(p: u64) -> Result<Self> {
        if p < 1 << 32 && is_prime(p) {
            Ok(Coeff::Zp(p))
        } else {
            Err(Error::Coefficients(format!("{p} is not a prime below 2^32")))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Coeff::Z)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Z => write!(f, "Z"),
            Coeff::Q => write!(f, "Q"),
            Coeff::Zp(p) => write!(f, "Z{p}"),
        }
    }
}

impl FromStr for Coeff {
    type Err = Error;

    /// Accepts `Z`, `Q`, `Z<p>`, `Zp<p>` and `Z/<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "Z" | "z" => return Ok(Coeff::Z),
            "Q" | "q" => return Ok(Coeff::Q),
            _ => {}
        }
        let digits = t
            .strip_prefix("Z/")
            .or_else(|| t.strip_prefix("Zp"))
            .or_else(|| t.strip_prefix('Z'))
            .ok_or_else(|| Error::Coefficients(format!("unknown coefficient ring {s:?}")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Coefficients(format!("unknown coefficient ring {s:?}")))?;
        Coeff::zp(p)
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finitely generated abelian group ℤ^r ⊕ ℤ/d₁ ⊕ … with d₁ | d₂ | …
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub free_rank: usize,
    #[serde(with = "torsion_serde")]
    pub torsion: Vec<BigInt>,
}

impl Group {
    pub fn free(rank: usize) -> Self {
        Group {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn with_torsion(rank: usize, torsion: &[u64]) -> Self {
        let t: Vec<BigInt> = torsion.iter().map(|&x| BigInt::from(x)).collect();
        Group {
            free_rank: rank,
            torsion: normalize_torsion(&t),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum.
    pub fn sum(&self, other: &Group) -> Group {
        let mut t = self.torsion.clone();
        t.extend(other.torsion.iter().cloned());
        Group {
            free_rank: self.free_rank + other.free_rank,
            torsion: normalize_torsion(&t),
        }
    }

    /// Tensor product with a free module of the given rank.
    pub fn times(&self, rank: usize) -> Group {
        let mut t = Vec::with_capacity(self.torsion.len() * rank);
        for _ in 0..rank {
            t.extend(self.torsion.iter().cloned());
        }
        Group {
            free_rank: self.free_rank * rank,
            torsion: normalize_torsion(&t),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

mod torsion_serde {
    use super::*;

    pub fn serialize<S: Serializer>(t: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let vals: Vec<serde_json::Value> = t
            .iter()
            .map(|d| match d.to_u64() {
                Some(x) => serde_json::Value::from(x),
                None => serde_json::Value::from(d.to_string()),
            })
            .collect();
        vals.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        vals.into_iter()
            .map(|v| match v {
                serde_json::Value::Number(n) => n
                    .as_u64()
                    .map(BigInt::from)
                    .ok_or_else(|| serde::de::Error::custom("torsion must be a positive integer")),
                serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
                _ => Err(serde::de::Error::custom("torsion must be a number or a string")),
            })
            .collect()
    }
}

/// Cohomology indexed by degree (`i32`) or bidegree (`(i32, i32)`); zero groups are not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Graded<D: Ord> {
    groups: BTreeMap<D, Group>,
}

pub type CohomologyResult = Graded<i32>;
pub type BigradedCohomology = Graded<(i32, i32)>;

impl<D: Ord + Copy> Default for Graded<D> {
    fn default() -> Self {
        Graded {
            groups: BTreeMap::new(),
        }
    }
}

impl<D: Ord + Copy> Graded<D> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `g` as a direct summand in degree `deg`.
    pub fn add(&mut self, deg: D, g: Group) {
        if g.is_zero() {
            return;
        }
        let merged = match self.groups.get(&deg) {
            Some(old) => old.sum(&g),
            None => g,
        };
        self.groups.insert(deg, merged);
    }

    pub fn merge(&mut self, other: &Graded<D>) {
        for (&d, g) in &other.groups {
            self.add(d, g.clone());
        }
    }

    pub fn get(&self, deg: D) -> Group {
        self.groups.get(&deg).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&D, &Group)> {
        self.groups.iter()
    }

    pub fn degrees(&self) -> impl Iterator<Item = D> + '_ {
        self.groups.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn total_free_rank(&self) -> usize {
        self.groups.values().map(|g| g.free_rank).sum()
    }

    pub fn filter(&self, mut keep: impl FnMut(D) -> bool) -> Self {
        Graded {
            groups: self
                .groups
                .iter()
                .filter(|(d, _)| keep(**d))
                .map(|(d, g)| (*d, g.clone()))
                .collect(),
        }
    }

    pub fn map_degrees<E: Ord + Copy>(&self, mut f: impl FnMut(D) -> E) -> Graded<E> {
        let mut out = Graded::new();
        for (&d, g) in &self.groups {
            out.add(f(d), g.clone());
        }
        out
    }

    /// First degree where the two results differ, if any.
    pub fn first_difference(&self, other: &Self) -> Option<D> {
        self.groups
            .keys()
            .chain(other.groups.keys())
            .copied()
            .filter(|&d| self.get(d) != other.get(d))
            .min()
    }
}

impl CohomologyResult {
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(&d, g)| {
                if d.rem_euclid(2) == 0 {
                    g.free_rank as i64
                } else {
                    -(g.free_rank as i64)
                }
            })
            .sum()
    }

    pub fn shifted(&self, by: i32) -> Self {
        self.map_degrees(|d| d + by)
    }

    /// Free ranks as a dense list from degree 0 up to the top nonzero degree.
    pub fn ranks(&self) -> Vec<usize> {
        let top = self.groups.keys().max().copied().unwrap_or(-1);
        (0..=top).map(|d| self.get(d).free_rank).collect()
    }
}

impl BigradedCohomology {
    /// Collapses a bigrading (deg₁, deg₂) to total degree deg₁ + deg₂.
    pub fn total(&self) -> CohomologyResult {
        self.map_degrees(|(a, b)| a + b)
    }
}

impl<D: Ord + Copy + fmt::Debug> fmt::Debug for Graded<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.groups.iter().map(|(d, g)| (d, g.to_string())))
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct Entry<D> {
    degree: D,
    #[serde(flatten)]
    group: Group,
}

impl<D: Ord + Copy + Serialize> Serialize for Graded<D> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Entry<D>> = self
            .groups
            .iter()
            .map(|(&degree, g)| Entry {
                degree,
                group: g.clone(),
            })
            .collect();
        entries.serialize(s)
    }
}

impl<'de, D: Ord + Copy + DeserializeOwned> Deserialize<'de> for Graded<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let entries = Vec::<Entry<D>>::deserialize(d)?;
        let mut out = Graded::new();
        for e in entries {
            out.add(e.degree, e.group);
        }
        Ok(out)
    }
}

/// The trivial group ring k in degree 0, as a result.
pub fn unit_result() -> CohomologyResult {
    let mut r = CohomologyResult::new();
    r.add(0, Group::free(1));
    r
}
