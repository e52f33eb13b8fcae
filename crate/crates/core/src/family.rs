//! Named colouring families behind a common trait, selected at runtime.

use std::collections::BTreeMap;

use crate::colouring::ProperEdgeColouring;
use crate::error::{Error, Result};
use crate::generators::{self, LatinSquare};

/// Everything a family may need to build an instance.
#[derive(Debug, Clone, Default)]
pub struct GenRequest {
    pub n: usize,
    pub seed: u64,
    pub latin: Option<LatinSquare>,
}

impl GenRequest {
    pub fn new(n: usize, seed: u64) -> Self {
        GenRequest { n, seed, latin: None }
    }
}

pub trait ColouringFamily: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    /// Whether `n` is a legal size for this family.
    fn supports(&self, n: usize) -> bool;

    fn generate(&self, request: &GenRequest) -> Result<ProperEdgeColouring>;
}

pub struct RoundRobin;

impl ColouringFamily for RoundRobin {
    fn name(&self) -> &'static str {
        "roundrobin"
    }

    fn describe(&self) -> &'static str {
        "circle-method 1-factorization of K_n, n even"
    }

    fn supports(&self, n: usize) -> bool {
        n >= 2 && n % 2 == 0
    }

    fn generate(&self, request: &GenRequest) -> Result<ProperEdgeColouring> {
        generators::round_robin(request.n)
    }
}

pub struct Xor;

impl ColouringFamily for Xor {
    fn name(&self) -> &'static str {
        "xor"
    }

    fn describe(&self) -> &'static str {
        "K_n coloured by x XOR y, n a power of two"
    }

    fn supports(&self, n: usize) -> bool {
        n >= 2 && n.is_power_of_two() && n.trailing_zeros() <= generators::MAX_XOR_EXPONENT
    }

    fn generate(&self, request: &GenRequest) -> Result<ProperEdgeColouring> {
        if !self.supports(request.n) {
            return Err(Error::InvalidArgument(format!("xor family needs a power of two >= 2, got {}", request.n)));
        }
        generators::xor_factorization(request.n.trailing_zeros())
    }
}

pub struct RandomProper;

impl ColouringFamily for RandomProper {
    fn name(&self) -> &'static str {
        "random"
    }

    fn describe(&self) -> &'static str {
        "relabelled round-robin colouring of K_n, any n >= 2"
    }

    fn supports(&self, n: usize) -> bool {
        n >= 2
    }

    fn generate(&self, request: &GenRequest) -> Result<ProperEdgeColouring> {
        generators::random_proper(request.n, request.seed)
    }
}

pub struct Latin;

impl ColouringFamily for Latin {
    fn name(&self) -> &'static str {
        "latin"
    }

    fn describe(&self) -> &'static str {
        "K_{n,n} from a Latin square (cyclic unless a square is supplied)"
    }

    fn supports(&self, n: usize) -> bool {
        n >= 1
    }

    fn generate(&self, request: &GenRequest) -> Result<ProperEdgeColouring> {
        match &request.latin {
            Some(square) => generators::latin_to_bipartite(square),
            None if request.n >= 1 => generators::latin_to_bipartite(&LatinSquare::cyclic(request.n)),
            None => Err(Error::InvalidArgument("latin family needs n >= 1".into())),
        }
    }
}

pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Box<dyn ColouringFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry { families: BTreeMap::new() }
    }

    /// The four built-in families.
    pub fn builtin() -> Self {
        let mut registry = FamilyRegistry::empty();
        registry.register(Box::new(RoundRobin));
        registry.register(Box::new(Xor));
        registry.register(Box::new(RandomProper));
        registry.register(Box::new(Latin));
        registry
    }

    /// Registers a family, replacing any previous one with the same name.
    pub fn register(&mut self, family: Box<dyn ColouringFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn ColouringFamily> {
        self.families.get(name).map(|f| f.as_ref()).ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.families.keys().copied()
    }

    pub fn generate(&self, name: &str, request: &GenRequest) -> Result<ProperEdgeColouring> {
        self.get(name)?.generate(request)
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        FamilyRegistry::builtin()
    }
}
