use thiserror::Error;

/// Everything that can go wrong while building or transforming complexes.
///
/// Vertex and hyperplane witnesses are carried by name so that messages stay
/// meaningful after the complex that produced them is dropped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty vertex list")]
    Empty,
    #[error("duplicate vertex identifier `{0}`")]
    DuplicateVertex(String),
    #[error("edge references unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("graph is not connected: `{0}` is unreachable from `{1}`")]
    NotConnected(String, String),
    #[error("triple ({}, {}, {}) has {} medians {:?}", .triple[0], .triple[1], .triple[2], .medians.len(), .medians)]
    NotMedian { triple: [String; 3], medians: Vec<String> },
    #[error("vertex set is not convex (missing `{0}`)")]
    NotConvex(String),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("unknown hyperplane `{0}`")]
    UnknownHyperplane(String),
    #[error("a hyperplane was compared with itself: `{0}`")]
    SameHyperplane(String),
    #[error("hyperplanes `{0}` and `{1}` are not transverse")]
    NotTransverse(String, String),
    #[error("not an automorphism: edge {0}-{1} is not mapped to an edge")]
    NotAutomorphism(String, String),
    #[error("not a bijection of the vertex set: {0}")]
    NotBijection(String),
    #[error("invalid pocset: {0}")]
    InvalidPocset(String),
    #[error("pocset pair `{0}` is degenerate (an element lies below its complement)")]
    DegeneratePair(String),
    #[error("transverse family is not maximal: `{0}` extends it")]
    NotMaximal(String),
    #[error("input too large: more than {0} candidates")]
    TooLarge(usize),
    #[error("inconsistent wall #{0}: {1}")]
    InconsistentWall(usize, String),
    #[error("duplicate wall #{0} repeats wall #{1}")]
    DuplicateWall(usize, usize),
    #[error("no isomorphism: {0}")]
    NoIsomorphism(String),
    #[error("strongly parallel class is not a chain: `{0}` and `{1}`")]
    NonChainClass(String, String),
    #[error("hyperplane `{0}` meets the class of `{1}` in a mixed way")]
    OutsiderMixed(String, String),
    #[error("product reconstruction failed: {0}")]
    ProductReconstructionFailed(String),
    #[error("spacing violated at `{hyperplane}`: `{first}` and `{second}` are at distance {distance} < {required}")]
    SpacingViolated { hyperplane: String, first: String, second: String, distance: u32, required: u32 },
    #[error("switch `{0}` does not see exactly two pieces on each side")]
    DegenerateSwitch(String),
    #[error("invalid crooked subtree: {0}")]
    InvalidSubtree(String),
    #[error("track does not separate: {0} components")]
    NotSeparating(usize),
    #[error("consecutive hyperplanes at index {0} are not transverse")]
    NotTransverseConsecutive(usize),
    #[error("vertex `{0}` is not on the carrier of `{1}`")]
    NotOnCarrier(String, String),
    #[error("path is not a geodesic: it crosses `{0}` twice")]
    NotGeodesic(String),
    #[error("not a path: `{0}` and `{1}` are not adjacent")]
    NotPath(String, String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// The variant name, used as a machine-readable reason.
    pub fn kind(&self) -> String {
        format!("{self:?}").chars().take_while(char::is_ascii_alphanumeric).collect()
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
