use thiserror::Error;

/// Errors raised by poset construction and the rowmotion machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("product of chains needs positive sides, got [{a}]x[{b}]")]
    EmptyChain { a: usize, b: usize },

    #[error("cover relation contains a cycle through element {element}")]
    Cycle { element: usize },

    #[error("duplicate cover pair ({lower}, {upper})")]
    DuplicateCover { lower: usize, upper: usize },

    #[error("cover pair references undeclared element `{name}`")]
    DanglingElement { name: String },

    #[error("duplicate element `{name}`")]
    DuplicateElement { name: String },

    #[error("element id {id} out of range for a poset with {len} elements")]
    ElementOutOfRange { id: usize, len: usize },

    #[error("subset is not an antichain: {x} and {y} are comparable")]
    NotAntichain { x: usize, y: usize },

    #[error("subset is not an order ideal: {below} < {member} is missing")]
    NotIdeal { member: usize, below: usize },

    #[error("subset is not an order filter: {above} > {member} is missing")]
    NotFilter { member: usize, above: usize },

    #[error("labeling has {got} values, poset has {expected} elements")]
    LabelingLength { expected: usize, got: usize },

    #[error("operation needs a rectangle poset [a]x[b]")]
    NotRectangle,

    #[error("operation needs a commutative realm")]
    NotCommutative,

    #[error("singular value at element {element} during {during}")]
    Singular { element: usize, during: &'static str },

    #[error("rowmotion step {step}")]
    SingularStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no nonsingular labeling after {attempts} attempts (seed {seed})")]
    SamplingExhausted { seed: u64, attempts: usize },

    #[error("the two interior factorizations disagree at ({i},{j})")]
    FactorizationMismatch { i: usize, j: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
