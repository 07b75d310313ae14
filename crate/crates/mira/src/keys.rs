//! MinRank instances and key pairs.

use crate::error::{Error, Result};
use crate::galois::{BaseField, BitReader, BitWriter, Fields};
use crate::hash::{Role, Xof};
use crate::matrix::MatFq;
use crate::params::ParameterSet;

/// Public matrices M_0, M_1..M_k of a MinRank instance.
#[derive(Clone, Debug)]
pub struct Instance {
    m: usize,
    n: usize,
    k: usize,
    m0: MatFq,
    mats: Vec<MatFq>,
    /// For entry p = j·m + i (column j, row i): the k values M_1[i,j]..M_k[i,j].
    stacked: Vec<u8>,
    /// M_0 in the same column-major order.
    m0_cols: Vec<u8>,
    /// Entries where exactly one M_t is nonzero, with value 1 (the identity
    /// block of a systematic instance): E there is x_t + M_0.
    unit: Vec<Option<usize>>,
}

impl Instance {
    pub fn new(m0: MatFq, mats: Vec<MatFq>) -> Self {
        let (m, n, k) = (m0.rows(), m0.cols(), mats.len());
        assert!(
            mats.iter().all(|a| a.rows() == m && a.cols() == n),
            "matrix shapes differ"
        );
        let mut stacked = vec![0u8; m * n * k];
        let mut m0_cols = vec![0u8; m * n];
        for j in 0..n {
            for i in 0..m {
                let p = j * m + i;
                m0_cols[p] = m0.get(i, j);
                for (t, a) in mats.iter().enumerate() {
                    stacked[p * k + t] = a.get(i, j);
                }
            }
        }
        let unit = if k == 0 {
            vec![None; m * n]
        } else {
            stacked
                .chunks(k)
                .map(|row| {
                    let mut nz = row.iter().enumerate().filter(|(_, &v)| v != 0);
                    match (nz.next(), nz.next()) {
                        (Some((t, &1)), None) => Some(t),
                        _ => None,
                    }
                })
                .collect()
        };
        Self {
            m,
            n,
            k,
            m0,
            mats,
            stacked,
            m0_cols,
            unit,
        }
    }

    pub fn m0(&self) -> &MatFq {
        &self.m0
    }

    /// M_1..M_k.
    pub fn matrices(&self) -> &[MatFq] {
        &self.mats
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// E = [M_0] + Σ x_i M_i as column-major entries; M_0 is included when
    /// `offset` is set.
    pub fn combine_columns(&self, f: &BaseField, x: &[u8], offset: bool) -> Vec<u8> {
        assert_eq!(x.len(), self.k);
        let k = self.k;
        (0..self.m * self.n)
            .map(|p| {
                let s = match self.unit[p] {
                    Some(t) => x[t],
                    None => f.dot(x, &self.stacked[p * k..(p + 1) * k]),
                };
                if offset {
                    f.add(s, self.m0_cols[p])
                } else {
                    s
                }
            })
            .collect()
    }

    /// M_0 + Σ x_i M_i.
    pub fn combine(&self, f: &BaseField, x: &[u8]) -> MatFq {
        let cols = self.combine_columns(f, x, true);
        let mut out = MatFq::zeros(self.m, self.n);
        for j in 0..self.n {
            for i in 0..self.m {
                out.set(i, j, cols[j * self.m + i]);
            }
        }
        out
    }

    /// Accepts iff rank(M_0 + Σ x_i M_i) ≤ r.
    pub fn validate_witness(&self, f: &BaseField, x: &[u8], r: usize) -> bool {
        x.len() == self.k && self.combine(f, x).rank(f) <= r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyForm {
    /// Every M_i expanded from the seed and the full M_0 published.
    Simple,
    /// M_i = row i of [I_k | L′] and the first k row-order entries of M_0 zero.
    Systematic,
}

const SIMPLE_FLAG: u8 = 0x80;

#[derive(Clone, Debug, PartialEq)]
pub struct PublicKey {
    pub params: ParameterSet,
    pub form: KeyForm,
    pub seed_pk: Vec<u8>,
    /// M_0 entries in row order, without the k leading zeros in systematic form.
    pub m0_entries: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecretKey {
    pub params: ParameterSet,
    pub form: KeyForm,
    pub seed_sk: Vec<u8>,
}

/// Secret data re-derived from the secret seed.
#[derive(Clone, Debug)]
pub struct Witness {
    pub x: Vec<u8>,
    pub e: MatFq,
}

struct Derived {
    seed_pk: Vec<u8>,
    x: Vec<u8>,
    e: MatFq,
    instance: Instance,
}

fn expand_matrices(
    params: &ParameterSet,
    f: &BaseField,
    form: KeyForm,
    seed_pk: &[u8],
) -> Vec<MatFq> {
    let (m, n, k) = (params.m, params.n, params.k);
    let mut s = Xof::new(Role::KeyGen)
        .update(&[1])
        .update(&params.instance_tag())
        .update(seed_pk)
        .sampler();
    match form {
        KeyForm::Simple => (0..k).map(|_| MatFq::random(f, m, n, &mut s)).collect(),
        KeyForm::Systematic => (0..k)
            .map(|i| {
                let mut row = vec![0u8; m * n];
                row[i] = 1;
                for v in &mut row[k..] {
                    *v = s.base(f);
                }
                MatFq::from_vec(m, n, row)
            })
            .collect(),
    }
}

fn derive(params: &ParameterSet, form: KeyForm, seed_sk: &[u8]) -> Result<Derived> {
    params.validate()?;
    let fields = params.fields()?;
    let f = &*fields.base;
    let (m, n, k, r) = (params.m, params.n, params.k, params.r);
    let mut s = Xof::new(Role::KeyGen)
        .update(&[0])
        .update(&params.instance_tag())
        .update(seed_sk)
        .sampler();
    let mut seed_pk = vec![0u8; params.seed_bytes()];
    s.bytes(&mut seed_pk);
    let e = MatFq::sample_rank_exact(f, m, n, r, &mut s);
    let mats = expand_matrices(params, f, form, &seed_pk);
    let (x, m0) = match form {
        KeyForm::Simple => {
            let x = s.base_vec(f, k);
            let mut m0 = e.clone();
            for (xi, mi) in x.iter().zip(&mats) {
                m0.add_scaled(f, f.neg(*xi), mi);
            }
            (x, m0)
        }
        KeyForm::Systematic => {
            let beta = s.base_vec(f, k);
            let mut big_f = e.clone();
            for (bi, mi) in beta.iter().zip(&mats) {
                big_f.add_scaled(f, f.neg(*bi), mi);
            }
            let lead: Vec<u8> = big_f.entries()[..k].to_vec();
            let mut m0 = big_f;
            for (fi, mi) in lead.iter().zip(&mats) {
                m0.add_scaled(f, f.neg(*fi), mi);
            }
            let x = beta.iter().zip(&lead).map(|(&b, &l)| f.add(b, l)).collect();
            (x, m0)
        }
    };
    Ok(Derived {
        seed_pk,
        x,
        e,
        instance: Instance::new(m0, mats),
    })
}

fn public_from(params: &ParameterSet, form: KeyForm, d: &Derived) -> PublicKey {
    let skip = if form == KeyForm::Systematic {
        params.k
    } else {
        0
    };
    PublicKey {
        params: params.clone(),
        form,
        seed_pk: d.seed_pk.clone(),
        m0_entries: d.instance.m0().entries()[skip..].to_vec(),
    }
}

/// Key pair from a λ-bit secret seed.
pub fn keygen_from_seed(
    params: &ParameterSet,
    form: KeyForm,
    seed_sk: &[u8],
) -> Result<(PublicKey, SecretKey)> {
    if seed_sk.len() != params.seed_bytes() {
        return Err(Error::InvalidParameters(format!(
            "secret seed must be {} bytes, got {}",
            params.seed_bytes(),
            seed_sk.len()
        )));
    }
    let d = derive(params, form, seed_sk)?;
    let pk = public_from(params, form, &d);
    Ok((
        pk,
        SecretKey {
            params: params.clone(),
            form,
            seed_sk: seed_sk.to_vec(),
        },
    ))
}

/// Key pair from arbitrary entropy, which is compressed into the λ-bit seed.
pub fn keygen(
    params: &ParameterSet,
    form: KeyForm,
    entropy: &[u8],
) -> Result<(PublicKey, SecretKey)> {
    let mut seed = vec![0u8; params.seed_bytes()];
    Xof::new(Role::KeyGen)
        .update(&[2])
        .update(entropy)
        .sampler()
        .bytes(&mut seed);
    keygen_from_seed(params, form, &seed)
}

pub fn keygen_simple(params: &ParameterSet, entropy: &[u8]) -> Result<(PublicKey, SecretKey)> {
    keygen(params, KeyForm::Simple, entropy)
}

pub fn keygen_optimized(params: &ParameterSet, entropy: &[u8]) -> Result<(PublicKey, SecretKey)> {
    keygen(params, KeyForm::Systematic, entropy)
}

impl PublicKey {
    pub fn instance(&self) -> Result<Instance> {
        let fields = self.params.fields()?;
        let f = &*fields.base;
        let mats = expand_matrices(&self.params, f, self.form, &self.seed_pk);
        let mut entries = Vec::with_capacity(self.params.m * self.params.n);
        if self.form == KeyForm::Systematic {
            entries.resize(self.params.k, 0);
        }
        entries.extend_from_slice(&self.m0_entries);
        Ok(Instance::new(
            MatFq::from_vec(self.params.m, self.params.n, entries),
            mats,
        ))
    }

    /// Encoded key without the identifier byte.
    pub fn body_bytes(&self) -> Vec<u8> {
        let f = BaseField::new(self.params.q).expect("validated field order");
        let mut w = BitWriter::new();
        w.put_bytes(&self.seed_pk);
        w.put_base(&f, &self.m0_entries);
        w.finish()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.file_id()];
        out.extend(self.body_bytes());
        out
    }

    fn file_id(&self) -> u8 {
        self.params.id()
            | if self.form == KeyForm::Simple {
                SIMPLE_FLAG
            } else {
                0
            }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (&id, body) = bytes
            .split_first()
            .ok_or_else(|| Error::Decode("empty public key".into()))?;
        let form = if id & SIMPLE_FLAG != 0 {
            KeyForm::Simple
        } else {
            KeyForm::Systematic
        };
        let params = ParameterSet::from_id(id & !SIMPLE_FLAG)?;
        Self::from_body(&params, form, body)
    }

    pub fn from_body(params: &ParameterSet, form: KeyForm, body: &[u8]) -> Result<Self> {
        let f = BaseField::new(params.q)?;
        let mut r = BitReader::new(body);
        let seed_pk = r.get_bytes(params.seed_bytes())?;
        let count = params.m * params.n
            - if form == KeyForm::Systematic {
                params.k
            } else {
                0
            };
        let m0_entries = r.get_base(&f, count)?;
        r.finish()?;
        Ok(Self {
            params: params.clone(),
            form,
            seed_pk,
            m0_entries,
        })
    }
}

impl SecretKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let id = self.params.id()
            | if self.form == KeyForm::Simple {
                SIMPLE_FLAG
            } else {
                0
            };
        let mut out = vec![id];
        out.extend_from_slice(&self.seed_sk);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (&id, body) = bytes
            .split_first()
            .ok_or_else(|| Error::Decode("empty secret key".into()))?;
        let form = if id & SIMPLE_FLAG != 0 {
            KeyForm::Simple
        } else {
            KeyForm::Systematic
        };
        let params = ParameterSet::from_id(id & !SIMPLE_FLAG)?;
        if body.len() != params.seed_bytes() {
            return Err(Error::Decode(format!(
                "secret key body must be {} bytes",
                params.seed_bytes()
            )));
        }
        Ok(Self {
            params,
            form,
            seed_sk: body.to_vec(),
        })
    }

    /// Replays key generation, returning the public key and witness.
    pub fn expand(&self) -> Result<(PublicKey, Witness)> {
        let d = derive(&self.params, self.form, &self.seed_sk)?;
        let pk = public_from(&self.params, self.form, &d);
        Ok((pk, Witness { x: d.x, e: d.e }))
    }

    /// The witness, after checking that this key belongs to `pk`.
    pub fn witness_for(&self, pk: &PublicKey) -> Result<Witness> {
        let (derived, w) = self.expand()?;
        if &derived != pk {
            return Err(Error::KeyMismatch(
                "secret key does not derive this public key".into(),
            ));
        }
        Ok(w)
    }
}

/// Wraps bytes as lowercase hex with a trailing newline.
pub fn armor(bytes: &[u8]) -> String {
    let mut s = hex::encode(bytes);
    s.push('\n');
    s
}

/// Accepts raw bytes or their hex armor.
pub fn dearmor(data: &[u8]) -> Result<Vec<u8>> {
    match std::str::from_utf8(data) {
        Ok(text)
            if !text.trim().is_empty() && text.trim().bytes().all(|b| b.is_ascii_hexdigit()) =>
        {
            hex::decode(text.trim()).map_err(|e| Error::Decode(e.to_string()))
        }
        _ => Ok(data.to_vec()),
    }
}

/// Fields and instance behind a public key, ready for signing or verifying.
#[derive(Clone, Debug)]
pub struct Context {
    pub params: ParameterSet,
    pub fields: Fields,
    pub instance: Instance,
    pub pk_bytes: Vec<u8>,
}

impl Context {
    pub fn new(pk: &PublicKey) -> Result<Self> {
        pk.params.validate()?;
        Ok(Self {
            params: pk.params.clone(),
            fields: pk.params.fields()?,
            instance: pk.instance()?,
            pk_bytes: pk.to_bytes(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Variant;

    #[test]
    fn key_sizes_match_the_tables() {
        for (v, level, pk_body, sk_body) in [
            (Variant::Additive, 1, 84, 16),
            (Variant::Additive, 3, 121, 24),
            (Variant::Additive, 5, 150, 32),
            (Variant::Threshold, 1, 117, 16),
            (Variant::Threshold, 3, 155, 24),
            (Variant::Threshold, 5, 195, 32),
        ] {
            let p = ParameterSet::operational(v, level).unwrap();
            let (pk, sk) = keygen_optimized(&p, b"sizes").unwrap();
            assert_eq!(pk.body_bytes().len(), pk_body, "{}", p.name());
            assert_eq!(sk.to_bytes().len() - 1, sk_body);
        }
    }

    #[test]
    fn optimized_keygen_properties() {
        let p = ParameterSet::operational(Variant::Additive, 1).unwrap();
        let (pk, sk) = keygen_optimized(&p, b"props").unwrap();
        let inst = pk.instance().unwrap();
        assert!(inst.m0().entries()[..p.k].iter().all(|&v| v == 0));
        let w = sk.witness_for(&pk).unwrap();
        let f = BaseField::new(16).unwrap();
        assert!(inst.validate_witness(&f, &w.x, p.r));
        assert_eq!(inst.combine(&f, &w.x), w.e);
        assert_eq!(w.e.rank(&f), p.r);
        let (pk2, _) = keygen_optimized(&p, b"other").unwrap();
        assert_ne!(pk.seed_pk, pk2.seed_pk);
        assert!(sk.witness_for(&pk2).is_err());
    }

    #[test]
    fn simple_keygen_and_encoding() {
        let p = ParameterSet::operational(Variant::Threshold, 1).unwrap();
        let (pk, sk) = keygen_simple(&p, b"simple").unwrap();
        assert_eq!(pk.body_bytes().len(), 16 + 156);
        let f = BaseField::new(251).unwrap();
        let w = sk.witness_for(&pk).unwrap();
        assert!(pk.instance().unwrap().validate_witness(&f, &w.x, p.r));
        assert_eq!(PublicKey::from_bytes(&pk.to_bytes()).unwrap(), pk);
        assert_eq!(SecretKey::from_bytes(&sk.to_bytes()).unwrap(), sk);
    }

    #[test]
    fn armor_round_trip() {
        let data = vec![0u8, 1, 2, 250];
        assert_eq!(dearmor(armor(&data).as_bytes()).unwrap(), data);
        assert_eq!(dearmor(&data).unwrap(), data);
    }
}
