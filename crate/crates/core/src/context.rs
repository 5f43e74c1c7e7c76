use std::collections::HashMap;

use crate::error::{Error, Result};

/// Index of a deformation parameter (z, eta, ...) in a [`Context`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(pub u16);

/// Index of a group coordinate function in a [`Context`].
///
/// The ordinal doubles as the position in the fixed coordinate order used for
/// canonical monomial comparison, so declaration order is semantically load
/// bearing: it pins the printed output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordId(pub u16);

/// Session registry of parameter and coordinate names.
///
/// Written once before any computation; expressions themselves only carry
/// numeric ids, so a `Context` is needed for parsing and printing but not for
/// arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    params: Vec<String>,
    coords: Vec<String>,
    param_index: HashMap<String, ParamId>,
    coord_index: HashMap<String, CoordId>,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Context {
    pub fn new<S: AsRef<str>>(params: &[S], coords: &[S]) -> Result<Context> {
        let mut ctx = Context {
            params: Vec::new(),
            coords: Vec::new(),
            param_index: HashMap::new(),
            coord_index: HashMap::new(),
        };
        for p in params {
            ctx.add_param(p.as_ref())?;
        }
        for c in coords {
            ctx.add_coord(c.as_ref())?;
        }
        Ok(ctx)
    }

    fn check_name(&self, name: &str) -> Result<()> {
        if !valid_identifier(name) {
            return Err(Error::InvalidInput(format!("invalid identifier `{name}`")));
        }
        if name == "i" || name == "exp" || name == "log" {
            return Err(Error::InvalidInput(format!("reserved name `{name}`")));
        }
        if self.param_index.contains_key(name) || self.coord_index.contains_key(name) {
            return Err(Error::InvalidInput(format!("duplicate name `{name}`")));
        }
        Ok(())
    }

    pub fn add_param(&mut self, name: &str) -> Result<ParamId> {
        self.check_name(name)?;
        let id = ParamId(self.params.len() as u16);
        self.params.push(name.to_string());
        self.param_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_coord(&mut self, name: &str) -> Result<CoordId> {
        self.check_name(name)?;
        let id = CoordId(self.coords.len() as u16);
        self.coords.push(name.to_string());
        self.coord_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn param(&self, name: &str) -> Option<ParamId> {
        self.param_index.get(name).copied()
    }

    pub fn coord(&self, name: &str) -> Option<CoordId> {
        self.coord_index.get(name).copied()
    }

    pub fn param_name(&self, id: ParamId) -> &str {
        &self.params[id.0 as usize]
    }

    pub fn coord_name(&self, id: CoordId) -> &str {
        &self.coords[id.0 as usize]
    }

    pub fn params(&self) -> impl Iterator<Item = ParamId> + '_ {
        (0..self.params.len() as u16).map(ParamId)
    }

    pub fn coords(&self) -> impl Iterator<Item = CoordId> + '_ {
        (0..self.coords.len() as u16).map(CoordId)
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn n_coords(&self) -> usize {
        self.coords.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declares_and_looks_up() {
        let ctx = Context::new(&["z", "eta"], &["Jp", "Jm", "J3"]).unwrap();
        assert_eq!(ctx.param("z"), Some(ParamId(0)));
        assert_eq!(ctx.coord("J3"), Some(CoordId(2)));
        assert_eq!(ctx.coord_name(CoordId(0)), "Jp");
        assert!(ctx.param("q").is_none());
    }

    #[test]
    fn rejects_duplicates_and_reserved() {
        assert!(Context::new(&["z", "z"], &[]).is_err());
        assert!(Context::new(&["i"], &[]).is_err());
        assert!(Context::new(&["z"], &["z"]).is_err());
        assert!(Context::new(&["2z"], &[]).is_err());
    }
}
