//! C ABI over the lifting engine: opaque handles, integer error codes, and
//! UTF-8 JSON/text exchange. Every returned string is owned by the library
//! and must be released with `nla_string_free`.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Mutex;

use nichols::liftings::{build_presentation, LiftingParams, PresKind};
use nichols::realization::Realization;
use nichols::smash::{parse_poly, print_poly};
use nichols::verify::{closed_form_rhs, identities, lifting_rhs_oracle, Instance, Status, Systems};

/// Error codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum NlaStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    ConstraintViolation = 3,
    CollapsedToZero = 4,
    Inconclusive = 5,
    InternalError = 6,
}

static LAST_ERROR: Mutex<Option<CString>> = Mutex::new(None);

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    *LAST_ERROR.lock().unwrap() = Some(c);
}

fn classify(e: &nichols::error::Error) -> NlaStatus {
    use nichols::error::Error::*;
    match e {
        Parse(_) => NlaStatus::ParseError,
        InvalidParams(_) => NlaStatus::ConstraintViolation,
        CollapsesToZero(_) => NlaStatus::CollapsedToZero,
        Inconclusive { .. } => NlaStatus::Inconclusive,
        _ => NlaStatus::InternalError,
    }
}

/// An instance handle: a realization together with a parameter family.
pub struct NlaInstance {
    inst: Instance,
}

fn cstr_arg<'a>(ptr: *const c_char) -> Result<&'a str, NlaStatus> {
    if ptr.is_null() {
        set_error("null pointer argument".into());
        return Err(NlaStatus::InvalidArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        NlaStatus::InvalidArgument
    })
}

fn return_string(out: *mut *mut c_char, s: String) -> NlaStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return NlaStatus::InvalidArgument;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            NlaStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte".into());
            NlaStatus::InternalError
        }
    }
}

fn guarded<F: FnOnce() -> NlaStatus>(f: F) -> NlaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            NlaStatus::InternalError
        }
    }
}

/// Most recent error message, or NULL when no error has occurred.
/// The returned pointer stays valid until the next failing call.
#[no_mangle]
pub extern "C" fn nla_last_error() -> *const c_char {
    match &*LAST_ERROR.lock().unwrap() {
        Some(c) => c.as_ptr(),
        None => ptr::null(),
    }
}

/// Release a string returned by this library.
#[no_mangle]
pub extern "C" fn nla_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe {
            drop(CString::from_raw(s));
        }
    }
}

/// Create an instance from realization JSON and optional parameter JSON
/// (pass NULL for an undeformed instance). On success writes a handle.
#[no_mangle]
pub extern "C" fn nla_instance_new(
    realization_json: *const c_char,
    params_json: *const c_char,
    out: *mut *mut NlaInstance,
) -> NlaStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return NlaStatus::InvalidArgument;
        }
        let rjson = match cstr_arg(realization_json) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let real = match Realization::from_json(rjson) {
            Ok(r) => r,
            Err(e) => {
                set_error(e.to_string());
                return classify(&e);
            }
        };
        let params = if params_json.is_null() {
            LiftingParams::default()
        } else {
            let pjson = match cstr_arg(params_json) {
                Ok(s) => s,
                Err(e) => return e,
            };
            match LiftingParams::from_json(&real, pjson) {
                Ok(p) => p,
                Err(e) => {
                    set_error(e.to_string());
                    return classify(&e);
                }
            }
        };
        if let Err(e) = params.validate(&real) {
            set_error(e.to_string());
            return classify(&e);
        }
        let handle = Box::new(NlaInstance { inst: Instance::new("ffi", real, params) });
        unsafe { *out = Box::into_raw(handle) };
        NlaStatus::Ok
    })
}

/// Destroy an instance handle.
#[no_mangle]
pub extern "C" fn nla_instance_free(h: *mut NlaInstance) {
    if !h.is_null() {
        unsafe {
            drop(Box::from_raw(h));
        }
    }
}

fn kind_from_code(kind: c_int) -> Option<PresKind> {
    Some(match kind {
        0 => PresKind::Nichols,
        1 => PresKind::PreDistinguished,
        2 => PresKind::PreHatN2,
        3 => PresKind::Cleft,
        4 => PresKind::Lifting,
        _ => return None,
    })
}

/// Constraint report: empty string when all constraints hold, otherwise one
/// violation per line.
#[no_mangle]
pub extern "C" fn nla_check_params(h: *const NlaInstance, out: *mut *mut c_char) -> NlaStatus {
    guarded(|| {
        let inst = match unsafe { h.as_ref() } {
            Some(i) => &i.inst,
            None => {
                set_error("null instance".into());
                return NlaStatus::InvalidArgument;
            }
        };
        let v = inst.params.violations(&inst.real);
        return_string(out, v.join("\n"))
    })
}

/// Relation list of a presentation, one "label: lhs = rhs" line per relation.
/// kind: 0 = Nichols, 1 = distinguished pre-Nichols, 2 = order-2 hat
/// quotient, 3 = cleft object, 4 = lifting.
#[no_mangle]
pub extern "C" fn nla_present(
    h: *const NlaInstance,
    kind: c_int,
    out: *mut *mut c_char,
) -> NlaStatus {
    guarded(|| {
        let inst = match unsafe { h.as_ref() } {
            Some(i) => &i.inst,
            None => {
                set_error("null instance".into());
                return NlaStatus::InvalidArgument;
            }
        };
        let kind = match kind_from_code(kind) {
            Some(k) => k,
            None => {
                set_error(format!("unknown presentation kind code {kind}"));
                return NlaStatus::InvalidArgument;
            }
        };
        match build_presentation(kind, &inst.real, &inst.params) {
            Ok(pres) => {
                let lines: Vec<String> = pres
                    .relations
                    .iter()
                    .map(|rel| {
                        format!(
                            "{}: {} = {}",
                            rel.label,
                            print_poly(&rel.lhs),
                            print_poly(&rel.rhs)
                        )
                    })
                    .collect();
                return_string(out, lines.join("\n"))
            }
            Err(e) => {
                set_error(e.to_string());
                classify(&e)
            }
        }
    })
}

/// Normal form of expression text in the chosen quotient, completed up to
/// `bound` (pass 0 for the default 2*N*theta).
#[no_mangle]
pub extern "C" fn nla_reduce(
    h: *const NlaInstance,
    kind: c_int,
    expr: *const c_char,
    bound: c_int,
    out: *mut *mut c_char,
) -> NlaStatus {
    guarded(|| {
        let inst = match unsafe { h.as_ref() } {
            Some(i) => &i.inst,
            None => {
                set_error("null instance".into());
                return NlaStatus::InvalidArgument;
            }
        };
        let kind = match kind_from_code(kind) {
            Some(k) => k,
            None => {
                set_error(format!("unknown presentation kind code {kind}"));
                return NlaStatus::InvalidArgument;
            }
        };
        let expr = match cstr_arg(expr) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let r = &inst.real;
        let bound = if bound <= 0 { 2 * r.n as usize * r.theta } else { bound as usize };
        let result = (|| -> nichols::error::Result<String> {
            let pres = build_presentation(kind, r, &inst.params)?;
            let mut sys = pres.rewrite_system(r)?;
            sys.complete(r, bound)?;
            let p = parse_poly(r, expr)?;
            Ok(print_poly(&sys.reduce(r, &p)))
        })();
        match result {
            Ok(s) => return_string(out, s),
            Err(e) => {
                set_error(e.to_string());
                classify(&e)
            }
        }
    })
}

/// Total number of irreducible words of the completed system.
#[no_mangle]
pub extern "C" fn nla_dim(
    h: *const NlaInstance,
    kind: c_int,
    bound: c_int,
    out_total: *mut u64,
) -> NlaStatus {
    guarded(|| {
        let inst = match unsafe { h.as_ref() } {
            Some(i) => &i.inst,
            None => {
                set_error("null instance".into());
                return NlaStatus::InvalidArgument;
            }
        };
        let kind = match kind_from_code(kind) {
            Some(k) => k,
            None => {
                set_error(format!("unknown presentation kind code {kind}"));
                return NlaStatus::InvalidArgument;
            }
        };
        if out_total.is_null() {
            set_error("null output pointer".into());
            return NlaStatus::InvalidArgument;
        }
        let r = &inst.real;
        let bound = if bound <= 0 { 2 * r.n as usize * r.theta } else { bound as usize };
        let result = (|| -> nichols::error::Result<u64> {
            let pres = build_presentation(kind, r, &inst.params)?;
            let mut sys = pres.rewrite_system(r)?;
            sys.complete(r, bound)?;
            let counts = sys.irreducible_words(None, 4 * bound)?;
            Ok(counts.iter().sum::<u128>() as u64)
        })();
        match result {
            Ok(total) => {
                unsafe { *out_total = total };
                NlaStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                classify(&e)
            }
        }
    })
}

/// Closed form and oracle value of the deformed power relation for the root
/// (i, l), as "closed = ...\noracle = ...". Returns Inconclusive when the
/// two sides differ.
#[no_mangle]
pub extern "C" fn nla_sigma(
    h: *const NlaInstance,
    i: c_int,
    l: c_int,
    out: *mut *mut c_char,
) -> NlaStatus {
    guarded(|| {
        let inst = match unsafe { h.as_ref() } {
            Some(ih) => &ih.inst,
            None => {
                set_error("null instance".into());
                return NlaStatus::InvalidArgument;
            }
        };
        if i < 1 || l < i || l as usize > inst.real.theta {
            set_error("root indices out of range".into());
            return NlaStatus::InvalidArgument;
        }
        let (i, l) = (i as usize, l as usize);
        let result = (|| -> nichols::error::Result<(String, bool)> {
            let mut sys = Systems::new();
            let closed = closed_form_rhs(inst, i, l)?;
            let oracle = lifting_rhs_oracle(inst, &mut sys, i, l)?;
            let len = l - i + 1;
            let lsys =
                sys.get(inst, PresKind::LiftingTower(len - 1), inst.real.n as usize * len)?;
            let same = lsys.reduce(&inst.real, &oracle.sub(&closed)).is_zero();
            Ok((
                format!("closed = {}\noracle = {}", print_poly(&closed), print_poly(&oracle)),
                same,
            ))
        })();
        match result {
            Ok((text, same)) => {
                let status = return_string(out, text);
                if status != NlaStatus::Ok {
                    return status;
                }
                if same {
                    NlaStatus::Ok
                } else {
                    set_error("oracle and closed form differ".into());
                    NlaStatus::Inconclusive
                }
            }
            Err(e) => {
                set_error(e.to_string());
                classify(&e)
            }
        }
    })
}

/// Run an identity suite; writes the textual report and the number of
/// non-passing entries.
#[no_mangle]
pub extern "C" fn nla_verify_suite(
    h: *const NlaInstance,
    suite: *const c_char,
    out_report: *mut *mut c_char,
    out_failures: *mut u64,
) -> NlaStatus {
    guarded(|| {
        let inst = match unsafe { h.as_ref() } {
            Some(ih) => &ih.inst,
            None => {
                set_error("null instance".into());
                return NlaStatus::InvalidArgument;
            }
        };
        let suite = match cstr_arg(suite) {
            Ok(s) => s,
            Err(e) => return e,
        };
        if out_failures.is_null() {
            set_error("null output pointer".into());
            return NlaStatus::InvalidArgument;
        }
        let mut sys = Systems::new();
        match identities::run_suite(inst, &mut sys, suite) {
            Ok(entries) => {
                let mut lines = Vec::new();
                let mut failures = 0u64;
                for e in &entries {
                    let status = match e.status {
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                        Status::Inconclusive => "inconclusive",
                    };
                    if e.status != Status::Pass {
                        failures += 1;
                    }
                    lines.push(format!("{} [{}]", e.label, status));
                }
                unsafe { *out_failures = failures };
                return_string(out_report, lines.join("\n"))
            }
            Err(e) => {
                set_error(e.to_string());
                classify(&e)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bdr_json() -> (CString, CString) {
        let inst = nichols::samples::fixture_a2_n3_bdr();
        let r = serde_json::to_string(&inst.real.to_file()).unwrap();
        let p = serde_json::to_string(&inst.params.to_file()).unwrap();
        (CString::new(r).unwrap(), CString::new(p).unwrap())
    }

    #[test]
    fn roundtrip_through_the_c_surface() {
        let (r, p) = bdr_json();
        let mut handle: *mut NlaInstance = ptr::null_mut();
        assert!(nla_instance_new(r.as_ptr(), p.as_ptr(), &mut handle) == NlaStatus::Ok);
        // constraint report is empty
        let mut report: *mut c_char = ptr::null_mut();
        assert!(nla_check_params(handle, &mut report) == NlaStatus::Ok);
        let text = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_string();
        nla_string_free(report);
        assert!(text.is_empty());
        // dimension of the Nichols quotient
        let mut total = 0u64;
        assert!(nla_dim(handle, 0, 0, &mut total) == NlaStatus::Ok);
        assert_eq!(total, 27);
        // reduce a Serre word in the lifting
        let expr = CString::new("a1.a1.a2").unwrap();
        let mut nf: *mut c_char = ptr::null_mut();
        assert!(nla_reduce(handle, 4, expr.as_ptr(), 0, &mut nf) == NlaStatus::Ok);
        let nf_text = unsafe { CStr::from_ptr(nf) }.to_str().unwrap().to_string();
        nla_string_free(nf);
        assert!(nf_text.contains("a2.a1.a1"));
        // oracle agrees with the closed form
        let mut sigma: *mut c_char = ptr::null_mut();
        assert!(nla_sigma(handle, 1, 2, &mut sigma) == NlaStatus::Ok);
        nla_string_free(sigma);
        nla_instance_free(handle);
    }

    #[test]
    fn errors_are_reported() {
        let mut handle: *mut NlaInstance = ptr::null_mut();
        let bad = CString::new("{not json").unwrap();
        let st = nla_instance_new(bad.as_ptr(), ptr::null(), &mut handle);
        assert!(st == NlaStatus::ParseError);
        assert!(!nla_last_error().is_null());
    }
}
