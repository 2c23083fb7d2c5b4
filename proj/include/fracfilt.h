/* C API of the fracfilt shared library: opaque handles, integer status codes.
 * All functions are thread-compatible; the last-error message is thread-local. */

#ifndef FRACFILT_H
#define FRACFILT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ff_status {
    FF_OK = 0,
    FF_ERR_CHECKS = 1,   /* run finished, at least one check failed   */
    FF_ERR_CONFIG = 2,   /* invalid configuration                      */
    FF_ERR_NUMERIC = 3,  /* numerical failure during the run           */
    FF_ERR_INVALID = 4,  /* bad handle / argument                      */
    FF_ERR_IO = 5        /* file system failure                        */
} ff_status;

typedef struct ff_config ff_config;
typedef struct ff_report ff_report;

const char* ff_version(void);

/* Last error message of the calling thread (empty string if none). */
const char* ff_last_error(void);

ff_status ff_config_load_file(const char* path, ff_config** out);
ff_status ff_config_load_string(const char* json_text, ff_config** out);
ff_status ff_config_default(ff_config** out);
void ff_config_free(ff_config* cfg);

ff_status ff_config_set_seed(ff_config* cfg, uint64_t master_seed);
ff_status ff_config_set_output_dir(ff_config* cfg, const char* dir);
ff_status ff_config_set_jobs(ff_config* cfg, int jobs);
ff_status ff_config_set_check_level(ff_config* cfg, const char* level); /* fast | full */

/* JSON echo of the resolved configuration; owned by the config handle. */
const char* ff_config_json(const ff_config* cfg);

/* Run one subcommand: simulate | filter-bayes | filter-curve | dmz-check |
 * properties | convergence. On FF_OK or FF_ERR_CHECKS a report is returned. */
ff_status ff_run(const ff_config* cfg, const char* subcommand, ff_report** out);

const char* ff_report_json(const ff_report* rep);
int ff_report_ok(const ff_report* rep);
int ff_report_exit_code(const ff_report* rep);
void ff_report_free(ff_report* rep);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FRACFILT_H */
