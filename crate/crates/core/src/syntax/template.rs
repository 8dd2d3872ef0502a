use super::{subst_formula, subst_term, Formula, Term, TermVar};

/// A formula with distinguished free variables standing for its
/// arguments.
#[derive(Clone, Debug, PartialEq)]
pub struct Template {
    pub holes: Vec<TermVar>,
    pub body: Formula,
}

impl Template {
    pub fn new(holes: Vec<TermVar>, body: Formula) -> Self {
        Template { holes, body }
    }

    /// Capture-avoiding instantiation of the holes.
    pub fn instantiate(&self, args: &[Term]) -> Formula {
        assert_eq!(args.len(), self.holes.len(), "template arity");
        let sigma: Vec<(TermVar, Term)> = self.holes.iter().cloned().zip(args.iter().cloned()).collect();
        subst_formula(&self.body, &sigma)
    }
}

/// A term with parameters: a macro.
#[derive(Clone, Debug, PartialEq)]
pub struct TermTemplate {
    pub params: Vec<TermVar>,
    pub body: Term,
}

impl TermTemplate {
    pub fn new(params: Vec<TermVar>, body: Term) -> Self {
        TermTemplate { params, body }
    }

    pub fn instantiate(&self, args: &[Term]) -> Term {
        assert_eq!(args.len(), self.params.len(), "macro arity");
        let sigma: Vec<(TermVar, Term)> = self.params.iter().cloned().zip(args.iter().cloned()).collect();
        subst_term(&self.body, &sigma)
    }
}
