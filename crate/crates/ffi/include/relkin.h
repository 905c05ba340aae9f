#ifndef RELKIN_H
#define RELKIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a call.
typedef enum RelkinStatus {
  RELKIN_STATUS_OK = 0,
  RELKIN_STATUS_NULL_POINTER = 1,
  RELKIN_STATUS_INVALID_ARGUMENT = 2,
  // A requested speed is not below 1.
  RELKIN_STATUS_SUPERLUMINAL = 3,
  // The point is outside the region where the frame is defined.
  RELKIN_STATUS_DOMAIN = 4,
  // An iteration or integration did not meet its accuracy check.
  RELKIN_STATUS_NUMERICAL = 5,
  // The frame is not rigid along the orbit.
  RELKIN_STATUS_NOT_MEANINGFUL = 6,
  // The orbit's velocity does not return to its initial value.
  RELKIN_STATUS_NO_RETURN = 7,
  // The orbit is not an integral curve of the frame.
  RELKIN_STATUS_NOT_INTEGRAL_CURVE = 8,
  RELKIN_STATUS_PANIC = 9,
} RelkinStatus;

typedef enum RelkinProfile {
  RELKIN_PROFILE_CONVENTIONAL = 0,
  RELKIN_PROFILE_TROCHERIS_TAKENO = 1,
  RELKIN_PROFILE_MODIFIED = 2,
  RELKIN_PROFILE_CONSTANT_A = 3,
} RelkinProfile;

typedef enum RelkinTransport {
  RELKIN_TRANSPORT_BOOST = 0,
  RELKIN_TRANSPORT_FERMI_WALKER = 1,
} RelkinTransport;

// Frame field on Minkowski space.
typedef struct RelkinFrame RelkinFrame;

// Circular orbit in the lab frame.
typedef struct RelkinOrbit RelkinOrbit;

// A scenario with its frame and orbit already built.
typedef struct RelkinScenario RelkinScenario;

typedef struct RelkinThomas {
  double s_t;
  double angle;
  double unwrapped_angle;
  // 1 when the rotation is opposite to the orbital motion.
  int32_t retrograde;
} RelkinThomas;

typedef struct RelkinComparison {
  double speed;
  double gamma;
  double s_t;
  double thomas_angle;
  double foucault_angle;
  double thomas_angle_unwrapped;
  double foucault_angle_unwrapped;
  double condition_e_residual;
  double rigidity_residual;
  // 1 when the angles agree.
  int32_t matched;
} RelkinComparison;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call on this thread.
const char *relkin_last_error(void);

// Library version as a static nul-terminated string.
const char *relkin_version(void);

// Orbit of radius `radius` about the lab z axis at angular velocity `omega`.
//
// # Safety
// `out` must be valid for writes.
enum RelkinStatus relkin_orbit_new(double omega, double radius, struct RelkinOrbit **out);

// # Safety
// `orbit` must come from [`relkin_orbit_new`] and not be used afterwards. Null is ignored.
void relkin_orbit_free(struct RelkinOrbit *orbit);

// Lab speed, Lorentz factor and proper period of the orbit.
//
// # Safety
// `orbit` must be a live handle; each output must be valid for writes.
enum RelkinStatus relkin_orbit_info(const struct RelkinOrbit *orbit,
                                    double *speed,
                                    double *gamma,
                                    double *period);

// Position and four-velocity at proper time `s`, as `(t, x, y, z)`.
//
// # Safety
// `orbit` must be a live handle; `position` and `velocity` must each hold 4 doubles.
enum RelkinStatus relkin_orbit_state(const struct RelkinOrbit *orbit,
                                     double s,
                                     double *position,
                                     double *velocity);

// Thomas rotation over one period, integrated with `steps` steps.
//
// # Safety
// `orbit` must be a live handle; `out` must be valid for writes.
enum RelkinStatus relkin_thomas(const struct RelkinOrbit *orbit,
                                uint32_t steps,
                                struct RelkinThomas *out);

// Rotating frame about the lab z axis; `profile` is a [`RelkinProfile`] value.
//
// # Safety
// `out` must be valid for writes.
enum RelkinStatus relkin_frame_rotating(uint32_t profile,
                                        double a,
                                        double omega,
                                        struct RelkinFrame **out);

// Frame built around `orbit` by transporting its initial rest space with the
// [`RelkinTransport`] rule `transport`.
// `rotation` gives the extra spin as a rotation vector in the initial rest
// space and may be null for none.
//
// # Safety
// `orbit` must be a live handle; `rotation` is null or holds 3 doubles; `out` must be valid for writes.
enum RelkinStatus relkin_frame_custom(const struct RelkinOrbit *orbit,
                                      uint32_t transport,
                                      const double *rotation,
                                      struct RelkinFrame **out);

// # Safety
// `frame` must come from a `relkin_frame_*` constructor and not be used afterwards. Null is ignored.
void relkin_frame_free(struct RelkinFrame *frame);

// Four-velocity of the frame at event `x`.
//
// # Safety
// `frame` must be a live handle; `x` and `out` must each hold 4 doubles.
enum RelkinStatus relkin_frame_velocity(const struct RelkinFrame *frame,
                                        const double *x,
                                        double *out);

// Relative size of the symmetric part of the projected velocity gradient at `x`;
// zero for a rigid frame.
//
// # Safety
// `frame` must be a live handle; `x` must hold 4 doubles; `out` must be valid for writes.
enum RelkinStatus relkin_frame_rigidity(const struct RelkinFrame *frame,
                                        const double *x,
                                        double *out);

// Parses and builds a scenario from TOML text.
//
// # Safety
// `toml` must be a nul-terminated string; `out` must be valid for writes.
enum RelkinStatus relkin_scenario_from_toml(const char *toml, struct RelkinScenario **out);

// # Safety
// `scenario` must come from [`relkin_scenario_from_toml`] and not be used afterwards. Null is ignored.
void relkin_scenario_free(struct RelkinScenario *scenario);

// Foucault angle against Thomas angle over one period of the scenario's orbit.
//
// # Safety
// `scenario` must be a live handle; `out` must be valid for writes.
enum RelkinStatus relkin_scenario_compare(const struct RelkinScenario *scenario,
                                          struct RelkinComparison *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELKIN_H */
