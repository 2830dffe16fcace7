#include <math.h>
#include <stdio.h>
#include <string.h>
#include "sepool.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    /* two triangles joined by one edge */
    size_t us[] = {0, 1, 2, 3, 4, 5, 2};
    size_t vs[] = {1, 2, 0, 4, 5, 3, 3};
    SepGraph *g = NULL;
    CHECK(sep_graph_from_edges(6, us, vs, NULL, 7, &g) == SEP_STATUS_OK);
    CHECK(sep_graph_node_count(g) == 6);
    CHECK(sep_graph_volume(g) == 14.0);

    SepTree *t = NULL;
    CHECK(sep_tree_build(g, 1, &t) == SEP_STATUS_DOMAIN);
    CHECK(sep_last_error_message() != NULL);
    CHECK(sep_tree_build(g, 2, &t) == SEP_STATUS_OK);
    CHECK(sep_tree_height(t) == 2);
    CHECK(isfinite(sep_tree_entropy(t)));

    size_t clusters = 0;
    CHECK(sep_tree_level_size(t, 1, &clusters) == SEP_STATUS_OK);
    CHECK(clusters == 2);

    size_t assign[6];
    size_t len = 2;
    CHECK(sep_tree_assignment(t, 1, assign, &len) == SEP_STATUS_BUFFER_TOO_SMALL);
    CHECK(len == 6);
    CHECK(sep_tree_assignment(t, 1, assign, &len) == SEP_STATUS_OK);
    CHECK(assign[0] == assign[1] && assign[1] == assign[2]);
    CHECK(assign[3] == assign[4] && assign[4] == assign[5]);
    CHECK(assign[0] != assign[3]);

    char *json = NULL;
    CHECK(sep_tree_to_json(t, &json) == SEP_STATUS_OK);
    CHECK(strstr(json, "\"height\": 2") != NULL);
    sep_string_free(json);

    sep_tree_free(t);
    sep_graph_free(g);
    printf("ok %s\n", sep_version());
    return 0;
}
