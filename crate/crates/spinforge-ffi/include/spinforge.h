#ifndef SPINFORGE_H
#define SPINFORGE_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible entry point.
 */
typedef enum {
  SfStatusOk = 0,
  SfStatusNullPointer = 1,
  SfStatusInvalidArgument = 2,
  SfStatusNumericalFailure = 3,
  SfStatusNotFound = 4,
  SfStatusBufferTooSmall = 5,
  SfStatusUtf8 = 6,
} SfStatus;

/**
 * Opaque site-database handle.
 */
typedef struct SfSiteDb SfSiteDb;

/**
 * Opaque spin-model handle.
 */
typedef struct SfSpinParams SfSpinParams;

/**
 * One transition-table row.
 */
typedef struct {
  uintptr_t level_i;
  uintptr_t level_j;
  double freq_mhz;
  double intensity_parallel;
  double intensity_perp;
  double thermal_weight;
} SfTransition;

/**
 * One clock transition (df/dB = 0 point).
 */
typedef struct {
  uintptr_t track_i;
  uintptr_t track_j;
  double b_clock_tesla;
  double freq_mhz;
  double curvature_mhz_per_t2;
} SfClockTransition;

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * Message describing the most recent error on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sf_last_error_message(void);

/**
 * Create a spin model. Arrays are length-3 (xx, yy, zz); angles are in
 * degrees; `gn_mun_mhz_per_t` is the nuclear gyromagnetic factor in
 * MHz/T (11.213 for the I = 7/2 vanadium nucleus).
 *
 * # Safety
 * Array pointers must reference at least 3 readable doubles; `out` must
 * be a valid store location. Free the handle with
 * [`sf_spin_params_free`].
 */
SfStatus sf_spin_params_new(double electron_spin,
                            double nuclear_spin,
                            const double *g_principal,
                            const double *g_angles_deg,
                            const double *a_principal_mhz,
                            const double *a_angles_deg,
                            double gn_mun_mhz_per_t,
                            SfSpinParams **out);

/**
 * Release a spin-model handle.
 *
 * # Safety
 * `params` must come from this library and not be freed twice.
 */
void sf_spin_params_free(SfSpinParams *params);

/**
 * Hilbert-space dimension of the model (16 for S = 1/2, I = 7/2), or 0
 * on a null handle.
 *
 * # Safety
 * `params` must be a live handle from this library.
 */
uintptr_t sf_spin_params_dim(const SfSpinParams *params);

/**
 * Load the built-in site database.
 *
 * # Safety
 * `out` must be a valid store location; free with [`sf_site_db_free`].
 */
SfStatus sf_site_db_builtin(SfSiteDb **out);

/**
 * Load a site database from a TOML file.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` as in [`sf_site_db_builtin`].
 */
SfStatus sf_site_db_load(const char *path, SfSiteDb **out);

/**
 * Release a database handle.
 *
 * # Safety
 * `db` must come from this library and not be freed twice.
 */
void sf_site_db_free(SfSiteDb *db);

/**
 * Resolve a site ("4H:beta") and orbital ("GS1", "GS2", "ES1") into a
 * spin-model handle, applying the documented defaults for entries the
 * table leaves unresolved.
 *
 * # Safety
 * `db` must be a live handle; strings NUL-terminated; `out` valid.
 */
SfStatus sf_site_params(const SfSiteDb *db,
                        const char *site,
                        const char *orbital,
                        SfSpinParams **out);

/**
 * Sorted energy levels (MHz) at a static field (tesla, lab frame).
 * `len` must equal the model dimension.
 *
 * # Safety
 * `b_tesla` points to 3 doubles; `out_levels` to `len` writable doubles.
 */
SfStatus sf_eigenlevels(const SfSpinParams *params,
                        const double *b_tesla,
                        double *out_levels,
                        uintptr_t len);

/**
 * Magnetic-dipole transition table at a static field. Pass a negative
 * `temperature_k` to skip thermal weighting. Rows are written into `out`
 * (capacity `cap`); the full row count lands in `out_len` and the call
 * fails with `SfStatusBufferTooSmall` when it exceeds `cap`.
 *
 * # Safety
 * `b_tesla` points to 3 doubles; `out` to `cap` rows; `out_len` valid.
 */
SfStatus sf_transitions(const SfSpinParams *params,
                        const double *b_tesla,
                        double temperature_k,
                        bool include_nuclear_dipole,
                        SfTransition *out,
                        uintptr_t cap,
                        uintptr_t *out_len);

/**
 * Clock transitions (df/dB = 0) on a field range along `axis`. Buffer
 * semantics as in [`sf_transitions`].
 *
 * # Safety
 * `axis` points to 3 doubles; `out` to `cap` rows; `out_len` valid.
 */
SfStatus sf_clock_transitions(const SfSpinParams *params,
                              const double *axis,
                              double b_start_tesla,
                              double b_end_tesla,
                              SfClockTransition *out,
                              uintptr_t cap,
                              uintptr_t *out_len);

/**
 * Damped Rabi population transfer at time `t_us` (angular frequencies in
 * rad/µs, decay in 1/µs).
 */
double sf_rabi_signal(double t_us, double omega_r, double delta, double gamma);

/**
 * Photon autocorrelation g²(τ) = 1 − a·e^(−τ/τ1) + b·e^(−τ/τ2).
 */
double sf_g2(double tau_us, double a, double b, double tau1_us, double tau2_us);

/**
 * baseline + amplitude·e^(−t/τ).
 */
double sf_exp_decay(double t, double amplitude, double tau, double baseline);

/**
 * Isotope-configuration lineshape with the default carbon/silicon shells
 * and Gaussian sub-peaks, evaluated on `grid_ghz` into `out_y`.
 *
 * # Safety
 * `grid_ghz` and `out_y` must point to `len` readable/writable doubles.
 */
SfStatus sf_isotope_lineshape_default(double f0_ghz,
                                      double fwhm_ghz,
                                      const double *grid_ghz,
                                      double *out_y,
                                      uintptr_t len);

#endif  /* SPINFORGE_H */
