//! C ABI for `comax`.
//!
//! Capacities and functionals cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free` function. Every fallible call
//! returns a [`ComaxStatus`]; on failure [`comax_last_error`] describes the
//! problem for the calling thread. Results are written through out-pointers,
//! which are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use comax::{
    choquet_integral, integral_functional, maxplus_integral, property_report, reconstruct_capacity, roundtrip_check,
    sugeno_integral, Capacity, Error, FiniteSpace, Functional, PossibilityDensity, RealFunction, SpaceMap,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComaxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidCapacity = 3,
    DomainMismatch = 4,
    Parse = 5,
    NotStabilized = 6,
    InvalidFunctional = 7,
    Panic = 8,
}

/// A validated capacity on a finite space.
pub struct ComaxCapacity(Capacity);

/// A real functional on the functions of a finite space.
pub struct ComaxFunctional(Functional);

/// Signature of a caller-supplied functional: `values` holds `len` doubles.
pub type ComaxEvalFn = extern "C" fn(values: *const f64, len: usize, user_data: *mut c_void) -> f64;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn status_of(error: &Error) -> ComaxStatus {
    match error {
        Error::DomainMismatch { .. } | Error::TableLength { .. } => ComaxStatus::DomainMismatch,
        Error::OutOfRange { .. } | Error::Boundary { .. } | Error::NotMonotone { .. } | Error::InvalidDensity(_) => {
            ComaxStatus::InvalidCapacity
        }
        Error::NotStabilized { .. } => ComaxStatus::NotStabilized,
        Error::InvalidFunctional { .. } | Error::NonFiniteFunctional { .. } => ComaxStatus::InvalidFunctional,
        Error::Parse(_) => ComaxStatus::Parse,
        _ => ComaxStatus::InvalidArgument,
    }
}

struct Failure(ComaxStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ComaxStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ComaxStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            ComaxStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ComaxStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn doubles<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(ComaxStatus::Parse, format!("{what} is not UTF-8: {e}")))
}

fn string_out(text: String) -> Result<*mut c_char, Failure> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| Failure(ComaxStatus::InvalidArgument, "string contains NUL".into()))
}

fn space(size: usize) -> Result<FiniteSpace, Failure> {
    Ok(FiniteSpace::new(size)?)
}

fn function(space: &FiniteSpace, values: &[f64]) -> Result<RealFunction, Failure> {
    Ok(RealFunction::new(space, values.to_vec())?)
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next `comax_*` call on the same thread.
#[no_mangle]
pub extern "C" fn comax_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn comax_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a capacity from a dense table of `2^size` values indexed by subset bitmask.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_new(
    size: usize,
    values: *const f64,
    len: usize,
    out: *mut *mut ComaxCapacity,
) -> ComaxStatus {
    guard(|| {
        let table = doubles(values, len, "values")?.to_vec();
        let c = Capacity::new(&space(size)?, table)?;
        write(out, boxed(ComaxCapacity(c)))
    })
}

/// Parses a capacity from JSON (`{"size", "values"}` or a density `{"weights"}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_from_json(json: *const c_char, out: *mut *mut ComaxCapacity) -> ComaxStatus {
    guard(|| {
        let value: serde_json::Value =
            serde_json::from_str(str_arg(json, "json")?).map_err(|e| Failure(ComaxStatus::Parse, e.to_string()))?;
        let c = comax::cli::capacity_from_json(value).map_err(|e| match e {
            comax::cli::CliError::Library(e) => Failure::from(e),
            other => Failure(ComaxStatus::Parse, other.to_string()),
        })?;
        write(out, boxed(ComaxCapacity(c)))
    })
}

/// Serializes a capacity as JSON; release the result with `comax_string_free`.
///
/// # Safety
/// `capacity` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_to_json(capacity: *const ComaxCapacity, out: *mut *mut c_char) -> ComaxStatus {
    guard(|| {
        let c = as_ref(capacity, "capacity")?;
        let text = serde_json::to_string(&c.0).map_err(|e| Failure(ComaxStatus::InvalidArgument, e.to_string()))?;
        write(out, string_out(text)?)
    })
}

/// The possibility capacity `A ↦ max_{x∈A} weights[x]`; the weights must lie in
/// [0, 1] with maximum 1.
///
/// # Safety
/// `weights` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_from_density(
    weights: *const f64,
    len: usize,
    out: *mut *mut ComaxCapacity,
) -> ComaxStatus {
    guard(|| {
        let d = PossibilityDensity::new(doubles(weights, len, "weights")?.to_vec())?;
        write(out, boxed(ComaxCapacity(d.capacity())))
    })
}

/// The Dirac capacity at `point`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_dirac(size: usize, point: usize, out: *mut *mut ComaxCapacity) -> ComaxStatus {
    guard(|| write(out, boxed(ComaxCapacity(Capacity::dirac(&space(size)?, point)?))))
}

/// A random capacity, reproducible from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_random(size: usize, seed: u64, out: *mut *mut ComaxCapacity) -> ComaxStatus {
    guard(|| write(out, boxed(ComaxCapacity(Capacity::random_seeded(&space(size)?, seed)))))
}

/// # Safety
/// `capacity` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_free(capacity: *mut ComaxCapacity) {
    if !capacity.is_null() {
        drop(Box::from_raw(capacity));
    }
}

/// Number of points of the underlying space, or 0 for NULL.
///
/// # Safety
/// `capacity` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_size(capacity: *const ComaxCapacity) -> usize {
    capacity.as_ref().map_or(0, |c| c.0.size())
}

/// The value on the subset with bitmask `bits`.
///
/// # Safety
/// `capacity` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_value(capacity: *const ComaxCapacity, bits: u32, out: *mut f64) -> ComaxStatus {
    guard(|| {
        let c = &as_ref(capacity, "capacity")?.0;
        if (bits as usize) >= c.space().subset_count() {
            return Err(Failure(
                ComaxStatus::InvalidArgument,
                format!("bitmask {bits:#x} is outside a space of {} points", c.size()),
            ));
        }
        write(out, c.value_of_bits(bits))
    })
}

/// Whether the capacity is maxitive, `c(A ∪ B) = max(c(A), c(B))`.
///
/// # Safety
/// `capacity` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_is_possibility(capacity: *const ComaxCapacity, out: *mut bool) -> ComaxStatus {
    guard(|| write(out, as_ref(capacity, "capacity")?.0.is_possibility()))
}

/// Image of a capacity under the map `x ↦ image[x]` into a space of `codomain_size` points.
///
/// # Safety
/// `image` must point to `len` readable entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_capacity_pushforward(
    capacity: *const ComaxCapacity,
    image: *const usize,
    len: usize,
    codomain_size: usize,
    out: *mut *mut ComaxCapacity,
) -> ComaxStatus {
    guard(|| {
        let c = &as_ref(capacity, "capacity")?.0;
        if image.is_null() && len > 0 {
            return Err(null("image"));
        }
        let image = if len == 0 {
            Vec::new()
        } else {
            slice::from_raw_parts(image, len).to_vec()
        };
        let map = SpaceMap::new(c.space(), &space(codomain_size)?, image)?;
        write(out, boxed(ComaxCapacity(c.pushforward(&map)?)))
    })
}

type Integral = fn(&Capacity, &RealFunction) -> comax::Result<f64>;

unsafe fn integrate(
    integral: Integral,
    capacity: *const ComaxCapacity,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> ComaxStatus {
    guard(|| {
        let c = &as_ref(capacity, "capacity")?.0;
        let phi = function(c.space(), doubles(values, len, "values")?)?;
        write(out, integral(c, &phi)?)
    })
}

/// The max-plus integral `max_t ln c({φ ≥ t}) + t`.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_maxplus_integral(
    capacity: *const ComaxCapacity,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> ComaxStatus {
    integrate(maxplus_integral, capacity, values, len, out)
}

/// The Choquet integral.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_choquet_integral(
    capacity: *const ComaxCapacity,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> ComaxStatus {
    integrate(choquet_integral, capacity, values, len, out)
}

/// The Sugeno integral; every value must lie in [0, 1].
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_sugeno_integral(
    capacity: *const ComaxCapacity,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> ComaxStatus {
    integrate(sugeno_integral, capacity, values, len, out)
}

/// `φ ↦ ∫ φ dc` as a functional handle.
///
/// # Safety
/// `capacity` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_functional_from_capacity(
    capacity: *const ComaxCapacity,
    out: *mut *mut ComaxFunctional,
) -> ComaxStatus {
    guard(|| {
        write(
            out,
            boxed(ComaxFunctional(integral_functional(&as_ref(capacity, "capacity")?.0))),
        )
    })
}

struct Callback {
    eval: ComaxEvalFn,
    user_data: *mut c_void,
}

impl Callback {
    fn call(&self, values: &[f64]) -> f64 {
        (self.eval)(values.as_ptr(), values.len(), self.user_data)
    }
}

// The caller guarantees that `eval` and `user_data` may be used from any thread.
unsafe impl Send for Callback {}
unsafe impl Sync for Callback {}

/// Wraps a C callback as a functional on a space of `size` points.
///
/// # Safety
/// `eval` must be callable with `user_data` from any thread for as long as the
/// returned handle lives, and must not unwind.
#[no_mangle]
pub unsafe extern "C" fn comax_functional_from_callback(
    size: usize,
    eval: Option<extern "C" fn(values: *const f64, len: usize, user_data: *mut c_void) -> f64>,
    user_data: *mut c_void,
    out: *mut *mut ComaxFunctional,
) -> ComaxStatus {
    guard(|| {
        let eval = eval.ok_or_else(|| null("eval"))?;
        let callback = Callback { eval, user_data };
        let f = Functional::black_box(&space(size)?, move |phi| callback.call(phi.values()));
        write(out, boxed(ComaxFunctional(f)))
    })
}

/// # Safety
/// `functional` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn comax_functional_free(functional: *mut ComaxFunctional) {
    if !functional.is_null() {
        drop(Box::from_raw(functional));
    }
}

/// Evaluates a functional on the function with the given values.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_functional_eval(
    functional: *const ComaxFunctional,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> ComaxStatus {
    guard(|| {
        let f = &as_ref(functional, "functional")?.0;
        let phi = function(f.space(), doubles(values, len, "values")?)?;
        write(out, f.evaluate(&phi)?)
    })
}

/// Recovers the capacity represented by a comonotonically maxitive functional.
///
/// # Safety
/// `functional` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_reconstruct(
    functional: *const ComaxFunctional,
    tol: f64,
    out: *mut *mut ComaxCapacity,
) -> ComaxStatus {
    guard(|| {
        let c = reconstruct_capacity(&as_ref(functional, "functional")?.0, positive(tol)?)?;
        write(out, boxed(ComaxCapacity(c)))
    })
}

/// Largest tablewise gap between a capacity and the reconstruction of its integral.
///
/// # Safety
/// `capacity` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_roundtrip(capacity: *const ComaxCapacity, tol: f64, out: *mut f64) -> ComaxStatus {
    guard(|| write(out, roundtrip_check(&as_ref(capacity, "capacity")?.0, positive(tol)?)?))
}

/// Randomized axiom checks as a JSON report; release it with `comax_string_free`.
///
/// # Safety
/// `functional` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comax_property_report_json(
    functional: *const ComaxFunctional,
    trials: u64,
    seed: u64,
    tol: f64,
    out: *mut *mut c_char,
) -> ComaxStatus {
    guard(|| {
        let f = &as_ref(functional, "functional")?.0;
        if trials == 0 {
            return Err(Failure(
                ComaxStatus::InvalidArgument,
                "trials must be at least 1".into(),
            ));
        }
        let report = property_report(f, trials, seed, positive(tol)?);
        let text = serde_json::to_string(&report).map_err(|e| Failure(ComaxStatus::InvalidArgument, e.to_string()))?;
        write(out, string_out(text)?)
    })
}

fn positive(tol: f64) -> Result<f64, Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Failure(
            ComaxStatus::InvalidArgument,
            format!("tolerance must be positive, got {tol}"),
        ))
    }
}
