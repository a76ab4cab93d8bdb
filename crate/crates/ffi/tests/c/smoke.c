#include <stdio.h>
#include <string.h>

#include "schublci.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    SchublciPerm *w = NULL;
    CHECK(schublci_perm_parse("819372564", &w) == SCHUBLCI_STATUS_OK);
    CHECK(schublci_perm_size(w) == 9);

    SchublciLevel level;
    CHECK(schublci_inclusion_level(w, &level) == SCHUBLCI_STATUS_OK);
    CHECK(level == SCHUBLCI_LEVEL_ADBI_ONLY);

    size_t count = 0;
    CHECK(schublci_minimal_generator_count(w, &count) == SCHUBLCI_STATUS_OK);
    CHECK(count == 16);
    CHECK(count == 36 - schublci_perm_length(w));

    SchublciReport *report = NULL;
    CHECK(schublci_classify(w, &report) == SCHUBLCI_STATUS_OK);
    SchublciFlags flags;
    CHECK(schublci_report_flags(report, &flags) == SCHUBLCI_STATUS_OK);
    CHECK(flags.lci && !flags.dbi);
    char *json = NULL;
    CHECK(schublci_report_json(report, &json) == SCHUBLCI_STATUS_OK);
    CHECK(strstr(json, "\"lci\":true") != NULL);
    schublci_string_free(json);
    schublci_report_free(report);
    schublci_perm_free(w);

    SchublciPerm *bad = NULL;
    CHECK(schublci_perm_parse("42513", &bad) == SCHUBLCI_STATUS_OK);
    SchublciStatus s = schublci_minimal_generator_count(bad, &count);
    CHECK(s == SCHUBLCI_STATUS_NOT_LCI);
    CHECK(strcmp(schublci_status_name(s), "E_NOT_LCI") == 0);
    CHECK(strlen(schublci_last_error()) > 0);
    schublci_perm_free(bad);

    SchublciPerm *junk = NULL;
    CHECK(schublci_perm_parse("1,1", &junk) == SCHUBLCI_STATUS_PARSE);
    CHECK(junk == NULL);
    CHECK(schublci_classify(NULL, &report) == SCHUBLCI_STATUS_NULL_POINTER);

    char *out = NULL;
    CHECK(schublci_verify("counting", 5, 2, 0, &out) == SCHUBLCI_STATUS_OK);
    CHECK(strstr(out, "[1,2,3,5,8]") != NULL);
    schublci_string_free(out);
    CHECK(schublci_verify("ideal-pointsets", 9, 1, 0, &out) == SCHUBLCI_STATUS_BUDGET);

    puts("ok");
    return 0;
}
