use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis string {q:#x} appears more than once")]
    DuplicateBasis { q: u64 },
    #[error("squared amplitudes sum to {sum_sq}, expected 1 within {tol}")]
    NotNormalized { sum_sq: f64, tol: f64 },
    #[error("basis string {q:#x} does not fit in {n} qubits")]
    BadWidth { q: u64, n: usize },
    #[error("state description has no entries")]
    EmptySpec,
    #[error("qubit count {n} is out of the supported range 1..={max}")]
    UnsupportedQubitCount { n: usize, max: usize },
    #[error("amplitude vector length {len} is not a power of two")]
    BadAmplitudeCount { len: usize },

    #[error("qubit index {qubit} is out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("gate touches qubit {qubit} more than once")]
    OverlappingQubits { qubit: usize },
    #[error("matrix is not unitary (deviation {deviation})")]
    NotUnitary { deviation: f64 },
    #[error("amplitude magnitude {alpha_abs} exceeds branch weight {beta}")]
    GDomain { alpha_abs: f64, beta: f64 },

    #[error("mapping is not a bijection: point {point:#x}")]
    NotBijective { point: u64 },
    #[error("transpositions are not pairwise disjoint at point {point:#x}")]
    NotDisjoint { point: u64 },
    #[error("batch of {count} transpositions needs {needed} distinct points but width {n} offers {available}")]
    BatchTooLarge {
        count: usize,
        needed: u64,
        n: usize,
        available: u64,
    },
    #[error("batch size {count} is not a power of two")]
    NotPowerOfTwo { count: usize },
    #[error("no spare basis points left for padding")]
    NoSparePoints,

    #[error("{m} ancilla qubits are too few for {n} data qubits")]
    TooFewAncillas { n: usize, m: usize },
    #[error("block size {r} is invalid for {n} bits")]
    BadBlockSize { n: usize, r: usize },

    #[error("circuit width {width} exceeds the simulator cap {max}")]
    WidthTooLarge { width: usize, max: usize },
    #[error("circuit widths differ: {a} vs {b}")]
    WidthMismatch { a: usize, b: usize },
    #[error("gate {index} ({kind}) has no classical basis action")]
    NotClassical { index: usize, kind: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("gate has no file representation: {kind}")]
    UnsupportedGate { kind: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
