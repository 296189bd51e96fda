pub mod report;

use fqmzv::{Error, VerificationReport};

/// Process exit code for a finished verification sweep: 3 when a proven
/// family fails numerically, 0 otherwise (conjecture failures are findings,
/// not errors).
pub fn verification_exit_code(reports: &[VerificationReport]) -> u8 {
    let theorem_failure = reports
        .iter()
        .any(|r| !r.pass && r.case.family.is_theorem());
    if theorem_failure {
        3
    } else {
        0
    }
}

/// Process exit code for an error: 1 for bad requests, 2 for failures of
/// the computation itself.
pub fn error_exit_code(error: &Error) -> u8 {
    match error {
        Error::InvalidField(_) | Error::InvalidParameter(_) => 1,
        _ => 2,
    }
}
