//! Vendored seed literals. See `fixtures/README.md` for provenance.

/// The first 1000 decimal digits of π − 3.
pub const PI_MINUS_3: &str = include_str!("../fixtures/pi-minus-3.txt");

/// Looks up a fixture literal by name.
pub fn lookup(name: &str) -> Option<&'static str> {
    match name {
        "pi-minus-3" => Some(PI_MINUS_3.trim()),
        _ => None,
    }
}

/// Names accepted by [`lookup`].
pub const NAMES: &[&str] = &["pi-minus-3"];

#[cfg(test)]
mod tests {
    #[test]
    fn pi_fixture_has_a_thousand_digits() {
        let lit = super::lookup("pi-minus-3").unwrap();
        let digits = lit.strip_prefix("0.").unwrap();
        assert_eq!(digits.len(), 1000);
        assert!(digits.starts_with("14159265358979323846"));
        assert!(digits.bytes().all(|b| b.is_ascii_digit()));
    }
}
