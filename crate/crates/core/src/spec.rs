//! JSON run specifications: a group, its peripheral structure, subgroups and
//! diagnostic parameters.
//!
//! ```json
//! {
//!   "group": {"kind": "free", "rank": 2},
//!   "peripherals": [{"generators": ["a"]}],
//!   "subgroups": [{"generators": ["a b"]}],
//!   "params": {"radius": 10, "nmax": 8}
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, MarkedGroup};
use crate::subgroup::{PeripheralStructure, SubgroupSpec};
use crate::word::{default_names, parse_word, Word};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Free {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Abelian {
        rank: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        relations: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Heisenberg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    FreeProduct {
        factors: Vec<GroupSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    /// `phi` lists the images of the fiber generators; defaults to `a ↦ ab, b ↦ a`.
    MappingTorus {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi_inverse: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<MarkedGroup> {
        let (group, names) = match self {
            GroupSpec::Free { rank, names } => (MarkedGroup::free(*rank), names),
            GroupSpec::Abelian {
                rank,
                relations,
                names,
            } => (MarkedGroup::abelian(*rank, relations)?, names),
            GroupSpec::Heisenberg { names } => (MarkedGroup::heisenberg(), names),
            GroupSpec::FreeProduct { factors, names } => {
                let built = factors.iter().map(|f| f.build()).collect::<Result<Vec<_>>>()?;
                (MarkedGroup::free_product(built)?, names)
            }
            GroupSpec::MappingTorus {
                phi,
                phi_inverse,
                names,
            } => {
                let phi = phi.clone().unwrap_or_else(|| vec!["a b".into(), "a".into()]);
                let rank = phi.len();
                let fiber = match names {
                    Some(n) if n.len() == rank + 1 => n[..rank].to_vec(),
                    Some(n) => {
                        return Err(Error::Spec(format!(
                            "mapping torus of rank {rank} needs {} names, got {}",
                            rank + 1,
                            n.len()
                        )))
                    }
                    None => default_names(rank),
                };
                let words = |ws: &[String]| -> Result<Vec<Word>> {
                    ws.iter().map(|w| parse_word(w, &fiber)).collect()
                };
                let inverse = phi_inverse.as_deref().map(words).transpose()?;
                (MarkedGroup::mapping_torus(words(&phi)?, inverse)?, names)
            }
        };
        match names {
            Some(n) => group.with_names(n.clone()),
            None => Ok(group),
        }
    }
}

/// A subgroup `⟨T⟩`, optionally translated to the left coset `xH`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translate: Option<String>,
}

impl SubgroupEntry {
    /// Parses `"a b, A^2"` style comma-separated generator lists.
    pub fn from_list(list: &str) -> Self {
        SubgroupEntry {
            name: None,
            generators: list
                .split(',')
                .map(|w| w.trim().to_string())
                .filter(|w| !w.is_empty())
                .collect(),
            translate: None,
        }
    }

    pub fn build(&self, group: &MarkedGroup) -> Result<SubgroupSpec> {
        let words: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        let spec = SubgroupSpec::from_words(group, &words)?;
        Ok(match &self.name {
            Some(n) => spec.with_name(n.clone()),
            None => spec,
        })
    }

    pub fn translate(&self, group: &MarkedGroup) -> Result<Element> {
        match &self.translate {
            Some(w) => Ok(group.eval(&parse_word(w, group.names())?)),
            None => Ok(group.identity()),
        }
    }
}

/// Diagnostic parameters; command-line flags override the spec file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<usize>,
    #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<usize>,
    #[serde(default, rename = "C_max", skip_serializing_if = "Option::is_none")]
    pub c_max: Option<u64>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// `exhaustive` or `sampled`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// `thin-triangle` or `four-point`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// `cayley`, `coned` or `cusped`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_threshold: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_cap: Option<usize>,
    /// A word: the path of `saturation`, the base vertex of `fineness`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    /// `fineness`: the edge runs from `word` to its cone point for this peripheral.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peripheral: Option<usize>,
    /// `fineness`: the edge runs from `word` along this generator letter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub letter: Option<String>,
    /// `closure`: explicit table `f(0..=N)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<u64>>,
    /// `closure`: `square`, `sqrt`, `one` or `random`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    /// Generator weights of the metric used by `qc5` and `transition-qc`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
}

macro_rules! overlay {
    ($self:ident, $other:ident; $($field:ident),*) => {
        $( if $other.$field.is_some() { $self.$field = $other.$field.clone(); } )*
    };
}

impl Params {
    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: &Params) {
        overlay!(self, other; radius, depth, margin, epsilon, r, lambda, l, nmax, big_n, c_max, m, n, ns,
            seed, samples, mode, method, space, budget, pair_threshold, path_cap, word, peripheral,
            letter, f, function, weights);
    }

    pub fn require<T: Clone>(value: &Option<T>, name: &str) -> Result<T> {
        value
            .clone()
            .ok_or_else(|| Error::Spec(format!("missing parameter {name}")))
    }

    /// Range checks that do not depend on the command.
    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambda {
            if !(1.0..=3.0).contains(&l) {
                return Err(Error::Spec(format!("lambda {l} outside [1, 3]")));
            }
        }
        if let Some(mode) = &self.mode {
            if mode != "exhaustive" && mode != "sampled" {
                return Err(Error::Spec(format!("unknown mode {mode}")));
            }
        }
        if let Some(m) = &self.method {
            if m != "thin-triangle" && m != "four-point" {
                return Err(Error::Spec(format!("unknown method {m}")));
            }
        }
        if let Some(s) = &self.space {
            if !["cayley", "coned", "cusped"].contains(&s.as_str()) {
                return Err(Error::Spec(format!("unknown space {s}")));
            }
        }
        if let Some(f) = &self.function {
            if !["square", "sqrt", "one", "random"].contains(&f.as_str()) {
                return Err(Error::Spec(format!("unknown function {f}")));
            }
        }
        if self.weights.as_ref().is_some_and(|w| w.contains(&0)) {
            return Err(Error::Spec("weights must be positive".into()));
        }
        if self.c_max == Some(0) {
            return Err(Error::Spec("C_max must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    /// Absent only for group-free commands such as `closure`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub peripherals: Vec<SubgroupEntry>,
    #[serde(default)]
    pub subgroups: Vec<SubgroupEntry>,
    #[serde(default)]
    pub params: Params,
}

impl RunSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("invalid run spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run specs serialize")
    }

    pub fn build_group(&self) -> Result<MarkedGroup> {
        self.group
            .as_ref()
            .ok_or_else(|| Error::Spec("the run spec has no group".into()))?
            .build()
    }

    pub fn build_peripherals(&self, group: &MarkedGroup) -> Result<PeripheralStructure> {
        let specs = self
            .peripherals
            .iter()
            .map(|p| p.build(group))
            .collect::<Result<Vec<_>>>()?;
        PeripheralStructure::new(specs)
    }

    pub fn build_subgroups(&self, group: &MarkedGroup) -> Result<Vec<(SubgroupSpec, Element)>> {
        self.subgroups
            .iter()
            .map(|s| Ok((s.build(group)?, s.translate(group)?)))
            .collect()
    }
}
