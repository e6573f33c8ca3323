//! Serde helpers: field elements travel as decimal strings so key files stay
//! readable and independent of integer-width quirks in other tooling.

pub mod dec_u64 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<u64, D::Error> {
        let s = String::deserialize(de)?;
        s.parse::<u64>()
            .map_err(|e| D::Error::custom(format!("not a decimal u64: {e}")))
    }
}
