//! Sign certificates, root isolation and the end-to-end proofs.

mod roots;
mod sign;
mod table1;
mod theorems;
mod unique_zero;

pub use roots::{
    eval_f_a, eval_f_a_reflected, find_x_a, find_x_a_with, m_a, smallest_positive_root, RootEnclosure, XaOptions,
};
pub use sign::{
    certify_sign, certify_sign_with, Leaf, LeafKind, Sign, SignCertificate, SignOptions, Status, DEFAULT_MAX_DEPTH,
};
pub use table1::{reproduce_table1, table1_row, PrintedEntry, Table1Row, PRINTED_TABLE, TABLE_TOLERANCE};
pub use theorems::{
    compare_p1_with, compare_with_m_a, interior_points, prove_theorem4, prove_theorem5, prove_theorem7,
    prove_theorem7_on, prove_theorem8, theorem8_point, CertifiedPolynomial, Check, ProofConfig, TheoremReport,
};
pub use unique_zero::{unique_zero_certificate, unique_zero_certificate_auto, UniqueZeroCertificate};
