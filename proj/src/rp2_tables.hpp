#pragma once

namespace torinv::builtin_tables {

// Frozen real-projective-plane chart-complex tables: antipodal quotient of the icosahedral
// cover with interior refinements for class realization.
inline constexpr int kRp2Vertices = 36;
inline constexpr int kRp2Edges[][3] = {  // a, b, sign of linear part
    {0, 1, 1},
    {0, 2, 1},
    {0, 3, -1},
    {0, 4, -1},
    {0, 5, -1},
    {0, 6, 1},
    {0, 7, 1},
    {0, 8, 1},
    {0, 9, 1},
    {0, 10, 1},
    {0, 16, 1},
    {0, 18, 1},
    {0, 20, 1},
    {0, 22, 1},
    {0, 24, 1},
    {1, 2, 1},
    {1, 3, 1},
    {1, 4, -1},
    {1, 5, 1},
    {1, 6, 1},
    {1, 7, 1},
    {1, 11, 1},
    {1, 12, 1},
    {1, 13, 1},
    {1, 16, 1},
    {1, 17, 1},
    {1, 19, 1},
    {1, 26, 1},
    {1, 28, 1},
    {1, 30, 1},
    {2, 3, -1},
    {2, 4, 1},
    {2, 5, 1},
    {2, 7, 1},
    {2, 8, 1},
    {2, 11, 1},
    {2, 14, 1},
    {2, 15, 1},
    {2, 18, 1},
    {2, 19, 1},
    {2, 21, -1},
    {2, 26, 1},
    {2, 27, 1},
    {2, 32, 1},
    {2, 34, 1},
    {3, 4, -1},
    {3, 5, 1},
    {3, 8, -1},
    {3, 10, -1},
    {3, 12, 1},
    {3, 13, 1},
    {3, 14, -1},
    {3, 20, -1},
    {3, 21, 1},
    {3, 25, 1},
    {3, 28, 1},
    {3, 29, 1},
    {3, 31, 1},
    {3, 32, -1},
    {3, 33, 1},
    {4, 5, 1},
    {4, 6, -1},
    {4, 9, -1},
    {4, 12, -1},
    {4, 14, 1},
    {4, 15, 1},
    {4, 17, -1},
    {4, 22, -1},
    {4, 23, 1},
    {4, 29, -1},
    {4, 33, -1},
    {4, 34, 1},
    {4, 35, 1},
    {5, 9, -1},
    {5, 10, -1},
    {5, 11, 1},
    {5, 13, 1},
    {5, 15, 1},
    {5, 23, 1},
    {5, 24, -1},
    {5, 25, 1},
    {5, 27, 1},
    {5, 30, 1},
    {5, 31, 1},
    {5, 35, 1},
    {6, 16, 1},
    {6, 17, 1},
    {7, 18, 1},
    {7, 19, 1},
    {8, 20, 1},
    {8, 21, -1},
    {9, 22, 1},
    {9, 23, -1},
    {10, 24, 1},
    {10, 25, -1},
    {11, 26, 1},
    {11, 27, 1},
    {12, 28, 1},
    {12, 29, 1},
    {13, 30, 1},
    {13, 31, 1},
    {14, 32, 1},
    {14, 33, -1},
    {15, 34, 1},
    {15, 35, 1},
};
inline constexpr int kRp2Triangles[][3] = {
    {4, 0, 6},
    {1, 0, 7},
    {2, 0, 8},
    {5, 0, 9},
    {3, 0, 10},
    {5, 1, 11},
    {4, 1, 12},
    {3, 1, 13},
    {4, 2, 14},
    {5, 2, 15},
    {1, 16, 0},
    {1, 6, 16},
    {6, 0, 16},
    {4, 17, 1},
    {4, 6, 17},
    {6, 1, 17},
    {2, 18, 0},
    {2, 7, 18},
    {7, 0, 18},
    {1, 19, 2},
    {1, 7, 19},
    {7, 2, 19},
    {3, 20, 0},
    {3, 8, 20},
    {8, 0, 20},
    {3, 2, 21},
    {2, 8, 21},
    {8, 21, 3},
    {4, 22, 0},
    {4, 9, 22},
    {9, 0, 22},
    {4, 23, 5},
    {5, 9, 23},
    {9, 4, 23},
    {5, 24, 0},
    {5, 10, 24},
    {10, 0, 24},
    {5, 25, 3},
    {3, 10, 25},
    {10, 5, 25},
    {1, 26, 2},
    {2, 11, 26},
    {11, 1, 26},
    {2, 27, 5},
    {5, 11, 27},
    {11, 2, 27},
    {1, 28, 3},
    {3, 12, 28},
    {12, 1, 28},
    {3, 4, 29},
    {4, 29, 12},
    {12, 3, 29},
    {1, 30, 5},
    {5, 13, 30},
    {13, 1, 30},
    {5, 31, 3},
    {3, 13, 31},
    {13, 5, 31},
    {2, 3, 32},
    {3, 32, 14},
    {14, 2, 32},
    {4, 33, 3},
    {4, 14, 33},
    {14, 3, 33},
    {2, 34, 4},
    {4, 15, 34},
    {15, 2, 34},
    {4, 35, 5},
    {5, 15, 35},
    {15, 4, 35},
};

}  // namespace torinv::builtin_tables
