//! Global variable registry.
//!
//! Every symbolic variable is interned once and referred to by a small
//! integer handle. The handle order (registration order) is the variable
//! order used by the monomial ordering.

use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

struct Registry {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

static REGISTRY: Lazy<RwLock<Registry>> = Lazy::new(|| {
    RwLock::new(Registry {
        names: Vec::new(),
        index: HashMap::new(),
    })
});

/// Handle to an interned variable name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    /// Interns `name`, returning the existing handle if already registered.
    pub fn new(name: &str) -> Var {
        if let Some(&i) = REGISTRY.read().unwrap().index.get(name) {
            return Var(i);
        }
        let mut reg = REGISTRY.write().unwrap();
        if let Some(&i) = reg.index.get(name) {
            return Var(i);
        }
        let i = reg.names.len() as u32;
        reg.names.push(name.to_string());
        reg.index.insert(name.to_string(), i);
        Var(i)
    }

    /// `prefix` followed by `i`, e.g. `Var::indexed("y", 3)` is `y3`.
    pub fn indexed(prefix: &str, i: usize) -> Var {
        Var::new(&format!("{prefix}{i}"))
    }

    pub fn name(self) -> String {
        REGISTRY.read().unwrap().names[self.0 as usize].clone()
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
