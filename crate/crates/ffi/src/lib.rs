//! C ABI for the pisolve toolkit.
//!
//! Games are held behind the opaque `PisolveGame` handle. Every call returns
//! a status code (`PISOLVE_OK` is 0); structured results come back as
//! heap-allocated JSON strings that the caller releases with
//! `pisolve_string_free`. After a nonzero status, `pisolve_last_error`
//! returns a human-readable message for the calling thread.
//!
//! The function surface mirrors the CLI subcommands; see
//! `include/pisolve.h` for the C declarations.

use pisolve::eval::{build_chain_for_profile, chain_values};
use pisolve::game::{validate, AssumptionBounds, GameInstance};
use pisolve::lp::solve_semi_stationary;
use pisolve::oracle::{oracle_solve, verify_nash, VerifyMode};
use pisolve::rational::{format_rational, parse_rational, to_f64};
use pisolve::reduction::{lift_strategy, reduce};
use pisolve::sim::{simulate_payoff, SimConfig};
use serde_json::json;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const PISOLVE_OK: i32 = 0;
pub const PISOLVE_ERR_INVALID: i32 = 1;
pub const PISOLVE_ERR_PARSE: i32 = 2;
pub const PISOLVE_ERR_SOLVER: i32 = 3;
pub const PISOLVE_ERR_DISAGREEMENT: i32 = 4;
pub const PISOLVE_ERR_CAP: i32 = 5;
pub const PISOLVE_ERR_STRATEGY: i32 = 6;
pub const PISOLVE_DEVIATIONS_FOUND: i32 = 7;
pub const PISOLVE_ERR_NULL: i32 = 8;
pub const PISOLVE_ERR_PANIC: i32 = 9;

/// Opaque game handle.
pub struct PisolveGame {
    game: GameInstance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

/// Copies text into a C string the caller owns.
fn string_out(text: String, out: *mut *mut c_char) -> i32 {
    let Ok(c) = CString::new(text) else {
        set_error("result contained an interior NUL byte");
        return PISOLVE_ERR_PANIC;
    };
    unsafe { *out = c.into_raw() };
    PISOLVE_OK
}

/// # Safety
/// `ptr` must be a valid NUL-terminated string or null.
unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(PISOLVE_ERR_NULL);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        PISOLVE_ERR_PARSE
    })
}

unsafe fn game_arg<'a>(ptr: *const PisolveGame) -> Result<&'a GameInstance, i32> {
    if ptr.is_null() {
        set_error("null game handle");
        return Err(PISOLVE_ERR_NULL);
    }
    Ok(&(*ptr).game)
}

fn guarded(body: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            PISOLVE_ERR_PANIC
        }
    }
}

/// Message for the last failure on this thread, as a fresh C string the
/// caller frees, or null when no failure was recorded.
#[no_mangle]
pub extern "C" fn pisolve_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.clone().into_raw())
            .unwrap_or(std::ptr::null_mut())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must have been produced by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn pisolve_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance from JSON into a new handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn pisolve_game_parse(
    json: *const c_char,
    out: *mut *mut PisolveGame,
) -> i32 {
    guarded(|| {
        clear_error();
        if out.is_null() {
            set_error("null output pointer");
            return PISOLVE_ERR_NULL;
        }
        let text = match str_arg(json) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match pisolve::io::parse_game(text) {
            Ok(game) => {
                *out = Box::into_raw(Box::new(PisolveGame { game }));
                PISOLVE_OK
            }
            Err(e) => {
                set_error(e.to_string());
                PISOLVE_ERR_PARSE
            }
        }
    })
}

/// Releases a game handle.
///
/// # Safety
/// `game` must come from `pisolve_game_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pisolve_game_free(game: *mut PisolveGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Validates the instance. Returns `PISOLVE_OK` or `PISOLVE_ERR_INVALID`;
/// either way `report_json` receives the full report.
///
/// # Safety
/// `game` must be a live handle; `report_json` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn pisolve_game_validate(
    game: *const PisolveGame,
    report_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let game = match game_arg(game) {
            Ok(g) => g,
            Err(code) => return code,
        };
        if report_json.is_null() {
            set_error("null output pointer");
            return PISOLVE_ERR_NULL;
        }
        let report = validate(game, &AssumptionBounds::default());
        let payload = json!({
            "ok": report.ok(),
            "violations": report.violations(),
        });
        let code = string_out(payload.to_string(), report_json);
        if code != PISOLVE_OK {
            return code;
        }
        if report.ok() {
            PISOLVE_OK
        } else {
            set_error("instance violates model rules");
            PISOLVE_ERR_INVALID
        }
    })
}

fn solved_report(game: &GameInstance, with_oracle: bool, cap: u64) -> Result<String, (i32, String)> {
    let report = validate(game, &AssumptionBounds::default());
    if !report.ok() {
        return Err((PISOLVE_ERR_INVALID, "instance violates model rules".into()));
    }
    let smdp = reduce(game);
    let solution =
        solve_semi_stationary(&smdp).map_err(|e| (PISOLVE_ERR_SOLVER, e.to_string()))?;
    let profile = lift_strategy(&solution.strategy, game);
    let mut payload = json!({
        "objectives": solution.values,
        "strategy": serde_json::to_value(pisolve::io::strategy_to_dto(&solution.strategy, 0)).unwrap(),
        "profile": profile
            .strategies()
            .iter()
            .enumerate()
            .map(|(i, s)| serde_json::to_value(pisolve::io::strategy_to_dto(s, i + 1)).unwrap())
            .collect::<Vec<_>>(),
        "pivots": solution.pivots,
    });
    if with_oracle {
        let result = oracle_solve(&smdp, cap).map_err(|e| (PISOLVE_ERR_CAP, e.to_string()))?;
        let mut max_diff: f64 = 0.0;
        for (s, exact) in result.best_values.iter().enumerate() {
            max_diff = max_diff.max((to_f64(exact) - solution.values[s]).abs());
        }
        payload["oracle"] = json!({
            "values": result.best_values.iter().map(format_rational).collect::<Vec<_>>(),
            "max_abs_diff": max_diff,
            "agrees": max_diff <= 1e-6,
        });
        if max_diff > 1e-6 {
            return Err((PISOLVE_ERR_DISAGREEMENT, format!("LP and enumeration disagree by {max_diff}")));
        }
    }
    Ok(payload.to_string())
}

/// Runs the solve pipeline (reduce, per-initial-state programs, lift) and
/// returns a JSON report. With `with_oracle != 0` the exact enumeration
/// cross-check runs too, failing with `PISOLVE_ERR_DISAGREEMENT` if the two
/// paths drift beyond 1e-6.
///
/// # Safety
/// `game` must be a live handle; `report_json` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn pisolve_game_solve(
    game: *const PisolveGame,
    with_oracle: i32,
    cap: u64,
    report_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let game = match game_arg(game) {
            Ok(g) => g,
            Err(code) => return code,
        };
        if report_json.is_null() {
            set_error("null output pointer");
            return PISOLVE_ERR_NULL;
        }
        match solved_report(game, with_oracle != 0, cap) {
            Ok(text) => string_out(text, report_json),
            Err((code, message)) => {
                set_error(message);
                code
            }
        }
    })
}

/// Full policy-to-value table by exact enumeration, as JSON.
///
/// # Safety
/// `game` must be a live handle; `table_json` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn pisolve_game_enumerate(
    game: *const PisolveGame,
    cap: u64,
    table_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let game = match game_arg(game) {
            Ok(g) => g,
            Err(code) => return code,
        };
        if table_json.is_null() {
            set_error("null output pointer");
            return PISOLVE_ERR_NULL;
        }
        let smdp = reduce(game);
        match oracle_solve(&smdp, cap) {
            Ok(result) => {
                let payload = json!({
                    "policies": result
                        .policies
                        .iter()
                        .zip(&result.values)
                        .map(|(p, v)| json!({
                            "policy": p.actions(),
                            "values": v.iter().map(format_rational).collect::<Vec<_>>(),
                        }))
                        .collect::<Vec<_>>(),
                    "best_values": result.best_values.iter().map(format_rational).collect::<Vec<_>>(),
                });
                string_out(payload.to_string(), table_json)
            }
            Err(e) => {
                set_error(e.to_string());
                PISOLVE_ERR_CAP
            }
        }
    })
}

/// Checks a strategy profile (JSON, as emitted in the solve report's
/// `profile` field) for improving unilateral deviations. `own_reward != 0`
/// compares each player's own accumulated reward; otherwise the
/// owner-spliced criterion is used. Returns `PISOLVE_DEVIATIONS_FOUND` when
/// an improving deviation exists.
///
/// # Safety
/// Pointer arguments must be valid as in the other calls.
#[no_mangle]
pub unsafe extern "C" fn pisolve_game_verify(
    game: *const PisolveGame,
    strategy_json: *const c_char,
    own_reward: i32,
    tol: *const c_char,
    cap: u64,
    report_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let game = match game_arg(game) {
            Ok(g) => g,
            Err(code) => return code,
        };
        if report_json.is_null() {
            set_error("null output pointer");
            return PISOLVE_ERR_NULL;
        }
        let strategy_text = match str_arg(strategy_json) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let tolerance = match str_arg(tol) {
            Ok(t) => match parse_rational(t) {
                Ok(r) => r,
                Err(e) => {
                    set_error(e.to_string());
                    return PISOLVE_ERR_PARSE;
                }
            },
            Err(code) => return code,
        };
        let profile = match pisolve::io::profile_from_json(
            strategy_text,
            game.num_players(),
            game.num_states(),
        ) {
            Ok(p) => p,
            Err(e) => {
                set_error(e.to_string());
                return PISOLVE_ERR_STRATEGY;
            }
        };
        let mode = if own_reward != 0 { VerifyMode::Definition3 } else { VerifyMode::Lemma };
        match verify_nash(game, &profile, mode, &tolerance, cap) {
            Ok(report) => {
                let payload = json!({
                    "mode": report.mode.to_string(),
                    "improving_found": !report.no_improvement(),
                    "rows": report.rows.iter().map(|r| json!({
                        "player": r.player,
                        "initial_state": r.initial_state,
                        "equilibrium": format_rational(&r.equilibrium),
                        "best_response": format_rational(&r.best_response),
                        "improving": r.improving,
                    })).collect::<Vec<_>>(),
                });
                let code = string_out(payload.to_string(), report_json);
                if code != PISOLVE_OK {
                    return code;
                }
                if report.no_improvement() {
                    PISOLVE_OK
                } else {
                    set_error("improving deviations found");
                    PISOLVE_DEVIATIONS_FOUND
                }
            }
            Err(pisolve::oracle::OracleError::CapExceeded { count, cap }) => {
                set_error(format!("{count} policies exceed the cap of {cap}"));
                PISOLVE_ERR_CAP
            }
            Err(e) => {
                set_error(e.to_string());
                PISOLVE_ERR_STRATEGY
            }
        }
    })
}

/// Monte Carlo estimate of the profile's payoffs from one initial state,
/// with analytic values alongside, as JSON.
///
/// # Safety
/// Pointer arguments must be valid as in the other calls.
#[no_mangle]
pub unsafe extern "C" fn pisolve_game_simulate(
    game: *const PisolveGame,
    strategy_json: *const c_char,
    initial_state: u32,
    steps: u64,
    seed: u64,
    replications: u32,
    report_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let game = match game_arg(game) {
            Ok(g) => g,
            Err(code) => return code,
        };
        if report_json.is_null() {
            set_error("null output pointer");
            return PISOLVE_ERR_NULL;
        }
        let strategy_text = match str_arg(strategy_json) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let s1 = initial_state as usize;
        if s1 < 1 || s1 > game.num_states() || steps == 0 || replications == 0 {
            set_error("initial_state, steps, and replications must be positive and in range");
            return PISOLVE_ERR_PARSE;
        }
        let profile = match pisolve::io::profile_from_json(
            strategy_text,
            game.num_players(),
            game.num_states(),
        ) {
            Ok(p) => p,
            Err(e) => {
                set_error(e.to_string());
                return PISOLVE_ERR_STRATEGY;
            }
        };
        let joint = match profile.joint_row(game, s1) {
            Ok(j) => j,
            Err(e) => {
                set_error(e.to_string());
                return PISOLVE_ERR_STRATEGY;
            }
        };
        let chain = match build_chain_for_profile(game, &joint) {
            Ok(c) => c,
            Err(e) => {
                set_error(e.to_string());
                return PISOLVE_ERR_STRATEGY;
            }
        };
        let analytic = match chain_values(&chain) {
            Ok(v) => v,
            Err(e) => {
                set_error(e.to_string());
                return PISOLVE_ERR_INVALID;
            }
        };
        let estimate = simulate_payoff(&chain, &SimConfig { steps, seed, initial_state: s1, replications });
        let payload = json!({
            "initial_state": s1,
            "rows": chain.criteria.iter().enumerate().map(|(k, criterion)| json!({
                "criterion": criterion.to_string(),
                "estimate": estimate.estimates[k],
                "analytic": to_f64(&analytic[k][s1 - 1]),
                "analytic_exact": format_rational(&analytic[k][s1 - 1]),
            })).collect::<Vec<_>>(),
        });
        string_out(payload.to_string(), report_json)
    })
}
