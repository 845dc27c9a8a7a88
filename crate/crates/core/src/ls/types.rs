use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeExpr {
    Unit,
    Omega,
    Sigma,
    R,
    Ground(String),
    Product(Vec<TypeExpr>),
    Power(Box<TypeExpr>),
}

impl TypeExpr {
    /// Builds a product; no factors gives `1` and a single factor is
    /// returned unchanged.
    pub fn product(mut factors: Vec<TypeExpr>) -> TypeExpr {
        match factors.len() {
            0 => TypeExpr::Unit,
            1 => factors.pop().unwrap(),
            _ => TypeExpr::Product(factors),
        }
    }

    pub fn power(t: TypeExpr) -> TypeExpr {
        TypeExpr::Power(Box::new(t))
    }

    pub fn grounds(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_grounds(&mut out);
        out
    }

    fn collect_grounds<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            TypeExpr::Ground(g) => {
                out.insert(g);
            }
            TypeExpr::Product(ts) => ts.iter().for_each(|t| t.collect_grounds(out)),
            TypeExpr::Power(t) => t.collect_grounds(out),
            _ => {}
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Unit => write!(f, "1"),
            TypeExpr::Omega => write!(f, "Omega"),
            TypeExpr::Sigma => write!(f, "Sigma"),
            TypeExpr::R => write!(f, "R"),
            TypeExpr::Ground(g) => write!(f, "{g}"),
            TypeExpr::Power(t) => write!(f, "P({t})"),
            TypeExpr::Product(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    if matches!(t, TypeExpr::Product(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl Serialize for TypeExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `1`, `Omega`, `Sigma`, `R`, ground names, `P(T)` and products
/// `T1 * T2 * ...`; parentheses group.
pub fn parse_ls_type(text: &str) -> Result<TypeExpr> {
    let mut p = TypeParser {
        src: text.as_bytes(),
        at: 0,
    };
    let t = p.product()?;
    p.skip_ws();
    if p.at < p.src.len() {
        return Err(Error::parse(p.at, "unexpected trailing input in type"));
    }
    Ok(t)
}

struct TypeParser<'a> {
    src: &'a [u8],
    at: usize,
}

impl TypeParser<'_> {
    fn skip_ws(&mut self) {
        while self.at < self.src.len() && self.src[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.at) == Some(&c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn product(&mut self) -> Result<TypeExpr> {
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(TypeExpr::product(factors))
    }

    fn factor(&mut self) -> Result<TypeExpr> {
        self.skip_ws();
        let start = self.at;
        if self.eat(b'(') {
            let t = self.product()?;
            if !self.eat(b')') {
                return Err(Error::parse(self.at, "expected `)` in type"));
            }
            return Ok(t);
        }
        if self.eat(b'1') {
            return Ok(TypeExpr::Unit);
        }
        while self.at < self.src.len() && (self.src[self.at].is_ascii_alphanumeric() || self.src[self.at] == b'_') {
            self.at += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.at]).unwrap_or("");
        match word {
            "" => Err(Error::parse(start, "expected a type")),
            "Omega" => Ok(TypeExpr::Omega),
            "Sigma" => Ok(TypeExpr::Sigma),
            "R" => Ok(TypeExpr::R),
            "P" if self.eat(b'(') => {
                let t = self.product()?;
                if !self.eat(b')') {
                    return Err(Error::parse(self.at, "expected `)` after power type"));
                }
                Ok(TypeExpr::power(t))
            }
            _ => Ok(TypeExpr::Ground(word.to_string())),
        }
    }
}

/// Ground types and function symbols of a local language.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    grounds: BTreeSet<String>,
    symbols: BTreeMap<String, (TypeExpr, TypeExpr)>,
}

const RESERVED: [&str; 14] = [
    "in", "true", "false", "forall", "exists", "Omega", "Sigma", "R", "P", "proj", "u", "inf", "1", "_",
];

impl Signature {
    /// A signature with the given extra ground types (besides `Sigma` and
    /// `R`) and function symbols `name : dom → cod`.
    pub fn new(
        grounds: impl IntoIterator<Item = String>,
        symbols: impl IntoIterator<Item = (String, TypeExpr, TypeExpr)>,
    ) -> Result<Self> {
        let mut sig = Signature::default();
        for g in grounds {
            if RESERVED.contains(&g.as_str()) || g.is_empty() || !g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidSystem(format!("`{g}` cannot name a ground type")));
            }
            if !sig.grounds.insert(g.clone()) {
                return Err(Error::InvalidSystem(format!("ground type `{g}` is declared twice")));
            }
        }
        for (name, dom, cod) in symbols {
            sig.add_symbol(name, dom, cod)?;
        }
        Ok(sig)
    }

    pub fn add_symbol(&mut self, name: String, dom: TypeExpr, cod: TypeExpr) -> Result<()> {
        if RESERVED.contains(&name.as_str()) || name.starts_with("proj_") {
            return Err(Error::InvalidSystem(format!("`{name}` is reserved")));
        }
        for t in [&dom, &cod] {
            for g in t.grounds() {
                if !self.grounds.contains(g) {
                    return Err(Error::Unassigned {
                        kind: "ground type",
                        name: g.to_string(),
                    });
                }
            }
        }
        if self.symbols.insert(name.clone(), (dom, cod)).is_some() {
            return Err(Error::InvalidSystem(format!("symbol `{name}` is declared twice")));
        }
        Ok(())
    }

    /// Checks that at least one symbol has type `Sigma → R`.
    pub fn validate(&self) -> Result<()> {
        if self.quantities().next().is_none() {
            return Err(Error::InvalidSystem("no function symbol of type Sigma -> R".into()));
        }
        Ok(())
    }

    pub fn grounds(&self) -> &BTreeSet<String> {
        &self.grounds
    }

    pub fn symbols(&self) -> &BTreeMap<String, (TypeExpr, TypeExpr)> {
        &self.symbols
    }

    pub fn symbol(&self, name: &str) -> Option<&(TypeExpr, TypeExpr)> {
        self.symbols.get(name)
    }

    /// Symbols of type `Sigma → R`, the physical quantities.
    pub fn quantities(&self) -> impl Iterator<Item = &str> {
        self.symbols
            .iter()
            .filter(|(_, (d, c))| *d == TypeExpr::Sigma && *c == TypeExpr::R)
            .map(|(n, _)| n.as_str())
    }

    pub fn knows_type(&self, t: &TypeExpr) -> bool {
        t.grounds().iter().all(|g| self.grounds.contains(*g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_types() {
        assert_eq!(
            parse_ls_type("P(Sigma * R)").unwrap(),
            TypeExpr::power(TypeExpr::Product(vec![TypeExpr::Sigma, TypeExpr::R]))
        );
        assert_eq!(parse_ls_type("1").unwrap(), TypeExpr::Unit);
        assert_eq!(parse_ls_type("(R)").unwrap(), TypeExpr::R);
        let nested = parse_ls_type("(R * R) * N").unwrap();
        assert_eq!(nested.to_string(), "(R * R) * N");
        assert_eq!(parse_ls_type(&nested.to_string()).unwrap(), nested);
        assert!(parse_ls_type("P(R").is_err());
        assert_eq!(TypeExpr::product(vec![]), TypeExpr::Unit);
    }

    #[test]
    fn signatures() {
        let sig = Signature::new(
            vec!["N".to_string()],
            vec![("A".to_string(), TypeExpr::Sigma, TypeExpr::R)],
        )
        .unwrap();
        assert!(sig.validate().is_ok());
        assert_eq!(sig.quantities().collect::<Vec<_>>(), vec!["A"]);
        let empty = Signature::new(Vec::<String>::new(), vec![]).unwrap();
        assert!(empty.validate().is_err());
        let dup = Signature::new(
            Vec::<String>::new(),
            vec![
                ("A".to_string(), TypeExpr::Sigma, TypeExpr::R),
                ("A".to_string(), TypeExpr::Sigma, TypeExpr::R),
            ],
        );
        assert!(dup.is_err());
        let unknown = Signature::new(
            Vec::<String>::new(),
            vec![("f".to_string(), TypeExpr::Ground("M".into()), TypeExpr::R)],
        );
        assert!(unknown.is_err());
    }
}
