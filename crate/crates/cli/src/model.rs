//! Objects defined by a problem file.

use ncx_core::problems::ParametricProblem;
use ncx_core::{Interval, NearlyConvexFn1D, VPolyhedron2, Vec2};

#[derive(Debug, Clone, PartialEq)]
pub enum SetDef {
    Interval(Interval),
    Polyhedron(VPolyhedron2),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParametricDef {
    pub f1: String,
    pub f2: String,
    pub graph: Option<String>,
    pub overrides: Vec<(Vec2, f64)>,
    pub problem: ParametricProblem,
}

/// Named functions, sets and parametric problems, in file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProblemFile {
    pub functions: Vec<(String, NearlyConvexFn1D)>,
    pub sets: Vec<(String, SetDef)>,
    pub parametrics: Vec<(String, ParametricDef)>,
}

fn find<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

impl ProblemFile {
    pub fn function(&self, name: &str) -> Option<&NearlyConvexFn1D> {
        find(&self.functions, name)
    }

    pub fn set(&self, name: &str) -> Option<&SetDef> {
        find(&self.sets, name)
    }

    pub fn parametric(&self, name: &str) -> Option<&ParametricDef> {
        find(&self.parametrics, name)
    }

    pub fn has_name(&self, name: &str) -> bool {
        self.function(name).is_some() || self.set(name).is_some() || self.parametric(name).is_some()
    }
}
