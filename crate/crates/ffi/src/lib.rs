//! C ABI for the Wubi codec, BPE segmentation and BLEU scoring.
//!
//! Every fallible call returns a [`WubiStatus`]; on failure the message is
//! available from [`wubi_last_error`] on the same thread. Strings returned
//! through `out` parameters are owned by the caller and must be released with
//! [`wubi_string_free`]. Handles are opaque and released with their `_free`
//! function; passing NULL to a `_free` function is a no-op.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wubi_core::metrics::bleu::corpus_bleu;
use wubi_core::metrics::bootstrap::paired_bootstrap;
use wubi_core::subword::{bpe_apply, BpeModel};
use wubi_core::{Codec, Error, Mode, PunctuationMap, WubiTable};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WubiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownCharacter = 4,
    MixedToken = 5,
    MalformedInput = 6,
    Decode = 7,
    LengthMismatch = 8,
    InvalidArgument = 9,
    Io = 10,
    Panic = 11,
}

impl From<&Error> for WubiStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } | Error::ConflictingCode { .. } => WubiStatus::Parse,
            Error::UnknownCharacter { .. } => WubiStatus::UnknownCharacter,
            Error::MixedToken { .. } => WubiStatus::MixedToken,
            Error::MalformedInput { .. } => WubiStatus::MalformedInput,
            Error::Decode { .. } => WubiStatus::Decode,
            Error::LengthMismatch { .. } => WubiStatus::LengthMismatch,
            Error::EmptyInput(_) | Error::InvalidArgument(_) => WubiStatus::InvalidArgument,
            Error::Io(_) => WubiStatus::Io,
        }
    }
}

/// Opaque codec handle (table plus punctuation map).
pub struct WubiCodec {
    inner: Codec,
}

/// Opaque handle to a learned BPE model.
pub struct WubiBpe {
    inner: BpeModel,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WubiSignificance {
    pub p_value: f64,
    pub delta: f64,
    pub bleu_a: f64,
    pub bleu_b: f64,
    pub samples: usize,
    pub b_at_least_a: usize,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', "\\0")).expect("NUL bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(WubiStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> WubiStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WubiStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            WubiStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(WubiStatus::NullPointer, format!("{name} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(WubiStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn str_array<'a>(p: *const *const c_char, n: usize, name: &str) -> Result<Vec<&'a str>, Failure> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(Failure(WubiStatus::NullPointer, format!("{name} is NULL")));
    }
    (0..n)
        .map(|i| str_arg(*p.add(i), &format!("{name}[{i}]")))
        .collect()
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure(WubiStatus::InvalidArgument, "result contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(WubiStatus::NullPointer, "out is NULL".into()));
    }
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn wubi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wubi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Codec over the built-in table and punctuation map. Never NULL.
#[no_mangle]
pub extern "C" fn wubi_codec_new_default() -> *mut WubiCodec {
    Box::into_raw(Box::new(WubiCodec {
        inner: Codec::fixture(),
    }))
}

/// Loads a codec from a table file and an optional (NULL) punctuation map file.
///
/// # Safety
/// Paths must be NULL or NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wubi_codec_from_files(
    table_path: *const c_char,
    punct_path: *const c_char,
    out: *mut *mut WubiCodec,
) -> WubiStatus {
    guard(|| {
        check_out(out)?;
        let table = WubiTable::from_path(str_arg(table_path, "table_path")?)?;
        let punct = if punct_path.is_null() {
            PunctuationMap::builtin()
        } else {
            PunctuationMap::from_path(str_arg(punct_path, "punct_path")?)?
        };
        *out = Box::into_raw(Box::new(WubiCodec {
            inner: Codec::new(table, punct),
        }));
        Ok(())
    })
}

/// # Safety
/// `codec` must be NULL or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wubi_codec_free(codec: *mut WubiCodec) {
    if !codec.is_null() {
        drop(Box::from_raw(codec));
    }
}

unsafe fn codec_ref<'a>(codec: *const WubiCodec) -> Result<&'a Codec, Failure> {
    codec
        .as_ref()
        .map(|c| &c.inner)
        .ok_or_else(|| Failure(WubiStatus::NullPointer, "codec is NULL".into()))
}

/// Encodes one segmented sentence. `lenient` non-zero selects lenient mode.
///
/// # Safety
/// `codec` must be a live handle, `sentence` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wubi_encode(
    codec: *const WubiCodec,
    sentence: *const c_char,
    lenient: c_int,
    out: *mut *mut c_char,
) -> WubiStatus {
    guard(|| {
        check_out(out)?;
        let codec = codec_ref(codec)?;
        let mode = if lenient != 0 { Mode::Lenient } else { Mode::Strict };
        let enc = codec.encode(str_arg(sentence, "sentence")?, mode)?;
        write_string(out, enc.text.render())
    })
}

/// Decodes one Wubi sentence back to segmented Chinese.
///
/// # Safety
/// As for [`wubi_encode`].
#[no_mangle]
pub unsafe extern "C" fn wubi_decode(
    codec: *const WubiCodec,
    encoded: *const c_char,
    out: *mut *mut c_char,
) -> WubiStatus {
    guard(|| {
        check_out(out)?;
        let codec = codec_ref(codec)?;
        write_string(out, codec.decode(str_arg(encoded, "encoded")?)?)
    })
}

/// Loads a merges file written by `wubi bpe-learn`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wubi_bpe_load(path: *const c_char, out: *mut *mut WubiBpe) -> WubiStatus {
    guard(|| {
        check_out(out)?;
        let path = str_arg(path, "path")?;
        let f = File::open(path).map_err(|e| Failure::from(Error::from(e)))?;
        let model = BpeModel::read_from(BufReader::new(f))?;
        *out = Box::into_raw(Box::new(WubiBpe { inner: model }));
        Ok(())
    })
}

/// # Safety
/// `bpe` must be NULL or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wubi_bpe_free(bpe: *mut WubiBpe) {
    if !bpe.is_null() {
        drop(Box::from_raw(bpe));
    }
}

/// Splits every word of `sentence` into subwords marked with `@@`.
///
/// # Safety
/// `bpe` must be a live handle, `sentence` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn wubi_bpe_apply(
    bpe: *const WubiBpe,
    sentence: *const c_char,
    out: *mut *mut c_char,
) -> WubiStatus {
    guard(|| {
        check_out(out)?;
        let model = bpe
            .as_ref()
            .ok_or_else(|| Failure(WubiStatus::NullPointer, "bpe is NULL".into()))?;
        write_string(out, bpe_apply(str_arg(sentence, "sentence")?, &model.inner))
    })
}

/// Corpus BLEU (0..100) of `n` hypotheses against `n` references.
///
/// # Safety
/// `hyps` and `refs` must point to `n` NUL-terminated strings each.
#[no_mangle]
pub unsafe extern "C" fn wubi_corpus_bleu(
    hyps: *const *const c_char,
    refs: *const *const c_char,
    n: usize,
    out_bleu: *mut f64,
) -> WubiStatus {
    guard(|| {
        check_out(out_bleu)?;
        let h = str_array(hyps, n, "hyps")?;
        let r = str_array(refs, n, "refs")?;
        *out_bleu = corpus_bleu(&h, &r)?.corpus_bleu;
        Ok(())
    })
}

/// Paired bootstrap test of system A over system B on `n` sentences.
///
/// # Safety
/// The three arrays must each hold `n` NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn wubi_paired_bootstrap(
    hyp_a: *const *const c_char,
    hyp_b: *const *const c_char,
    refs: *const *const c_char,
    n: usize,
    samples: usize,
    seed: u64,
    out: *mut WubiSignificance,
) -> WubiStatus {
    guard(|| {
        check_out(out)?;
        let a = str_array(hyp_a, n, "hyp_a")?;
        let b = str_array(hyp_b, n, "hyp_b")?;
        let r = str_array(refs, n, "refs")?;
        let s = paired_bootstrap(&a, &b, &r, samples, seed)?;
        *out = WubiSignificance {
            p_value: s.p_value,
            delta: s.delta,
            bleu_a: s.bleu_a,
            bleu_b: s.bleu_b,
            samples: s.samples,
            b_at_least_a: s.b_at_least_a,
            seed: s.seed,
        };
        Ok(())
    })
}
