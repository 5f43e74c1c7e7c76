//! Input deck schema and loading: a JSON description of the Lie bialgebra,
//! with optional representation, exponential order, recipes, coordinate
//! change, function-set reuse, and truncation order.

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use qdual_core::bialgebra::{
    cocommutator_from_r, Cocommutator, LieAlgebraData, LieBialgebra, RMatrix,
};
use qdual_core::coproduct::Recipe;
use qdual_core::grouprep::Representation;
use qdual_core::parse::{parse_body, parse_expr, parse_scalar};
use qdual_core::transform::CoordinateChange;
use qdual_core::{Context, CoordId, Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GenRef {
    Name(String),
    Index(usize),
}

#[derive(Debug, Clone, Deserialize)]
pub struct BracketEntry {
    pub pair: [GenRef; 2],
    pub result: Vec<GenCoeff>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GenCoeff {
    pub gen: GenRef,
    pub coeff: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct WedgeCoeff {
    pub pair: [GenRef; 2],
    pub coeff: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CocommutatorEntry {
    pub gen: GenRef,
    pub result: Vec<WedgeCoeff>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RepresentationSpec {
    pub dimension: usize,
    pub matrices: HashMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RecipeSpec {
    pub target: String,
    pub body: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CoordinateChangeSpec {
    pub forward: HashMap<String, String>,
    pub inverse: HashMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeckFile {
    pub name: String,
    pub parameters: Vec<String>,
    pub generators: Vec<String>,
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub cocommutator: Option<Vec<CocommutatorEntry>>,
    #[serde(default)]
    pub r_matrix: Option<Vec<WedgeCoeff>>,
    #[serde(default)]
    pub representation: Option<RepresentationSpec>,
    #[serde(default)]
    pub exp_order: Option<Vec<String>>,
    #[serde(default)]
    pub recipes: Option<Vec<RecipeSpec>>,
    #[serde(default)]
    pub coordinate_change: Option<CoordinateChangeSpec>,
    #[serde(default)]
    pub function_set_from: Option<String>,
    #[serde(default)]
    pub truncation_order: Option<u32>,
}

/// A fully parsed deck: names resolved, scalars and expressions parsed.
pub struct Deck {
    pub name: String,
    pub ctx: Context,
    pub coords: Vec<CoordId>,
    pub bialgebra: LieBialgebra,
    pub r_matrix: Option<RMatrix>,
    pub representation: Option<Representation>,
    pub exp_order: Vec<usize>,
    pub recipes: Option<Vec<Recipe>>,
    pub coordinate_change: Option<CoordinateChange>,
    pub function_set_from: Option<String>,
    pub truncation_order: u32,
}

fn resolve(ctx: &Context, coords: &[CoordId], r: &GenRef) -> Result<usize> {
    match r {
        GenRef::Name(n) => {
            let c = ctx
                .coord(n)
                .ok_or_else(|| Error::InvalidInput(format!("unknown generator `{n}`")))?;
            Ok(coords.iter().position(|&x| x == c).unwrap())
        }
        GenRef::Index(i) => {
            if *i == 0 || *i > coords.len() {
                return Err(Error::InvalidInput(format!(
                    "generator index {i} out of range (1-based)"
                )));
            }
            Ok(*i - 1)
        }
    }
}

impl Deck {
    pub fn parse(file: &DeckFile) -> Result<Deck> {
        let ctx = Context::new(&file.parameters, &file.generators)?;
        let d = file.generators.len();
        let coords: Vec<CoordId> = (0..d as u16).map(CoordId).collect();

        let mut algebra = LieAlgebraData::new(d);
        for entry in &file.brackets {
            let i = resolve(&ctx, &coords, &entry.pair[0])?;
            let j = resolve(&ctx, &coords, &entry.pair[1])?;
            if i == j {
                return Err(Error::InvalidInput("bracket pair must be distinct".into()));
            }
            for gc in &entry.result {
                let k = resolve(&ctx, &coords, &gc.gen)?;
                let s = parse_scalar(&ctx, &gc.coeff)?;
                algebra.set_bracket(i, j, k, s);
            }
        }

        let (cocommutator, r_matrix) = match (&file.cocommutator, &file.r_matrix) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidInput(
                    "give either `cocommutator` or `r_matrix`, not both".into(),
                ))
            }
            (None, None) => (Cocommutator::zero(d), None),
            (Some(entries), None) => {
                let mut f = Cocommutator::zero(d);
                for e in entries {
                    let i = resolve(&ctx, &coords, &e.gen)?;
                    for wc in &e.result {
                        let a = resolve(&ctx, &coords, &wc.pair[0])?;
                        let b = resolve(&ctx, &coords, &wc.pair[1])?;
                        let s = parse_scalar(&ctx, &wc.coeff)?;
                        if a == b {
                            return Err(Error::InvalidInput("wedge pair must be distinct".into()));
                        }
                        f.add_wedge(i, a, b, &s);
                    }
                }
                (f, None)
            }
            (None, Some(entries)) => {
                let mut r = RMatrix {
                    dim: d,
                    comp: vec![vec![qdual_core::Scalar::zero(); d]; d],
                };
                for wc in entries {
                    let a = resolve(&ctx, &coords, &wc.pair[0])?;
                    let b = resolve(&ctx, &coords, &wc.pair[1])?;
                    let s = parse_scalar(&ctx, &wc.coeff)?;
                    r.comp[a][b] = r.comp[a][b].add(&s);
                    r.comp[b][a] = r.comp[b][a].sub(&s);
                }
                let f = cocommutator_from_r(&algebra, &r);
                (f, Some(r))
            }
        };

        let representation = match &file.representation {
            None => None,
            Some(spec) => {
                let n = spec.dimension;
                let mut mats = vec![vec![vec![qdual_core::Scalar::zero(); n]; n]; d];
                for (gen, rows) in &spec.matrices {
                    let gi = resolve(&ctx, &coords, &GenRef::Name(gen.clone()))?;
                    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                        return Err(Error::InvalidInput(format!(
                            "representation matrix for `{gen}` is not {n}x{n}"
                        )));
                    }
                    for (r, row) in rows.iter().enumerate() {
                        for (c, s) in row.iter().enumerate() {
                            mats[gi][r][c] = parse_scalar(&ctx, s)?;
                        }
                    }
                }
                Some(Representation { dim: n, mats })
            }
        };

        let exp_order = match &file.exp_order {
            None => (0..d).collect(),
            Some(names) => {
                if names.len() != d {
                    return Err(Error::InvalidInput(
                        "exp_order must list every generator exactly once".into(),
                    ));
                }
                let mut order = Vec::with_capacity(d);
                for n in names {
                    let idx = resolve(&ctx, &coords, &GenRef::Name(n.clone()))?;
                    if order.contains(&idx) {
                        return Err(Error::InvalidInput(format!(
                            "generator `{n}` repeated in exp_order"
                        )));
                    }
                    order.push(idx);
                }
                order
            }
        };

        let recipes = match &file.recipes {
            None => None,
            Some(specs) => {
                let mut out = Vec::with_capacity(specs.len());
                for s in specs {
                    let target = ctx.coord(&s.target).ok_or_else(|| {
                        Error::InvalidInput(format!("unknown recipe target `{}`", s.target))
                    })?;
                    out.push(Recipe {
                        target,
                        body: parse_body(&ctx, &s.body)?,
                    });
                }
                Some(out)
            }
        };

        let coordinate_change = match &file.coordinate_change {
            None => None,
            Some(spec) => {
                let mut forward = HashMap::new();
                for (name, expr) in &spec.forward {
                    let x = ctx.coord(name).ok_or_else(|| {
                        Error::InvalidInput(format!("unknown coordinate `{name}`"))
                    })?;
                    forward.insert(x, parse_expr(&ctx, expr)?);
                }
                let mut inverse = HashMap::new();
                for (name, expr) in &spec.inverse {
                    let x = ctx.coord(name).ok_or_else(|| {
                        Error::InvalidInput(format!("unknown coordinate `{name}`"))
                    })?;
                    inverse.insert(x, parse_expr(&ctx, expr)?);
                }
                Some(CoordinateChange { forward, inverse })
            }
        };

        Ok(Deck {
            name: file.name.clone(),
            ctx,
            coords,
            bialgebra: LieBialgebra {
                algebra,
                cocommutator,
            },
            r_matrix,
            representation,
            exp_order,
            recipes,
            coordinate_change,
            function_set_from: file.function_set_from.clone(),
            truncation_order: file.truncation_order.unwrap_or(4),
        })
    }

    pub fn load(path: &Path) -> Result<Deck> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        let file: DeckFile = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Deck::parse(&file)
    }
}
