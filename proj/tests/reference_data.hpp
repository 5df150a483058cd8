#pragma once

// Published reference values, transcribed as printed (3 significant figures).

#include <array>

namespace vacent::reference {

struct Table1Row {
  double rt_over_d;
  double m_phi;
  double m_pi;
  double traced;
};

// d = 16, m = 1e-10.
inline constexpr std::array<Table1Row, 81> kTable1{{
    {0.00, 1.419, 3.280, 1.383},
    {0.25, 2.175e-1, 2.609, 1.297e-1},
    {0.50, 1.194e-1, 2.411, 4.999e-2},
    {0.75, 7.872e-2, 2.298, 2.519e-2},
    {1.00, 5.668e-2, 2.219, 1.342e-2},
    {1.25, 4.307e-2, 2.160, 6.793e-3},
    {1.50, 3.397e-2, 2.114, 3.047e-3},
    {1.75, 2.755e-2, 2.075, 1.262e-3},
    {2.00, 2.282e-2, 2.042, 5.828e-4},
    {2.25, 1.924e-2, 2.013, 3.099e-4},
    {2.50, 1.645e-2, 1.988, 1.752e-4},
    {2.75, 1.423e-2, 1.966, 9.788e-5},
    {3.00, 1.244e-2, 1.946, 5.036e-5},
    {3.25, 1.097e-2, 1.927, 2.229e-5},
    {3.50, 9.750e-3, 1.911, 8.616e-6},
    {3.75, 8.724e-3, 1.895, 3.582e-6},
    {4.00, 7.852e-3, 1.881, 1.806e-6},
    {4.25, 7.106e-3, 1.868, 1.025e-6},
    {4.50, 6.462e-3, 1.855, 6.053e-7},
    {4.75, 5.902e-3, 1.844, 3.495e-7},
    {5.00, 5.412e-3, 1.833, 1.844e-7},
    {5.25, 4.981e-3, 1.822, 8.202e-8},
    {5.50, 4.600e-3, 1.812, 3.004e-8},
    {5.75, 4.261e-3, 1.803, 1.072e-8},
    {6.00, 3.959e-3, 1.794, 4.790e-9},
    {6.25, 3.687e-3, 1.786, 2.607e-9},
    {6.50, 3.443e-3, 1.778, 1.557e-9},
    {6.75, 3.222e-3, 1.770, 9.533e-10},
    {7.00, 3.022e-3, 1.763, 5.675e-10},
    {7.25, 2.840e-3, 1.756, 3.075e-10},
    {7.50, 2.674e-3, 1.749, 1.378e-10},
    {7.75, 2.522e-3, 1.742, 4.839e-11},
    {8.00, 2.383e-3, 1.736, 1.487e-11},
    {8.25, 2.255e-3, 1.730, 5.474e-12},
    {8.50, 2.137e-3, 1.724, 2.724e-12},
    {8.75, 2.028e-3, 1.718, 1.590e-12},
    {9.00, 1.928e-3, 1.713, 9.918e-13},
    {9.25, 1.834e-3, 1.707, 6.261e-13},
    {9.50, 1.747e-3, 1.702, 3.817e-13},
    {9.75, 1.667e-3, 1.697, 2.104e-13},
    {10.00, 1.591e-3, 1.692, 9.334e-14},
    {10.25, 1.521e-3, 1.688, 3.035e-14},
    {10.50, 1.455e-3, 1.683, 8.195e-15},
    {10.75, 1.394e-3, 1.679, 2.303e-15},
    {11.00, 1.336e-3, 1.674, 9.918e-16},
    {11.25, 1.282e-3, 1.670, 5.528e-16},
    {11.50, 1.231e-3, 1.666, 3.435e-16},
    {11.75, 1.183e-3, 1.662, 2.223e-16},
    {12.00, 1.138e-3, 1.658, 1.437e-16},
    {12.25, 1.095e-3, 1.654, 8.882e-17},
    {12.50, 1.055e-3, 1.650, 4.890e-17},
    {12.75, 1.017e-3, 1.647, 2.044e-17},
    {13.00, 9.806e-4, 1.643, 5.500e-18},
    {13.25, 9.464e-4, 1.640, 1.271e-18},
    {13.50, 9.139e-4, 1.636, 2.366e-19},
    {13.75, 8.831e-4, 1.633, 8.067e-20},
    {14.00, 8.538e-4, 1.630, 4.235e-20},
    {14.25, 8.260e-4, 1.626, 2.599e-20},
    {14.50, 7.995e-4, 1.623, 1.700e-20},
    {14.75, 7.743e-4, 1.620, 1.133e-20},
    {15.00, 7.502e-4, 1.617, 7.430e-21},
    {15.25, 7.273e-4, 1.614, 4.587e-21},
    {15.50, 7.053e-4, 1.611, 2.437e-21},
    {15.75, 6.844e-4, 1.608, 8.272e-22},
    {16.00, 6.644e-4, 1.605, 1.175e-22},
    {16.25, 6.452e-4, 1.603, 2.131e-23},
    {16.50, 6.269e-4, 1.600, 0},
    {16.75, 6.093e-4, 1.597, 0},
    {17.00, 5.925e-4, 1.595, 0},
    {17.25, 5.763e-4, 1.592, 0},
    {17.50, 5.608e-4, 1.590, 0},
    {17.75, 5.459e-4, 1.587, 0},
    {18.00, 5.316e-4, 1.585, 0},
    {18.25, 5.179e-4, 1.582, 0},
    {18.50, 5.047e-4, 1.580, 0},
    {18.75, 4.920e-4, 1.578, 0},
    {19.00, 4.797e-4, 1.575, 0},
    {19.25, 4.679e-4, 1.573, 0},
    {19.50, 4.566e-4, 1.571, 0},
    {19.75, 4.456e-4, 1.568, 0},
    {20.00, 4.351e-4, 1.566, 0},
}};

struct Table2Row {
  long rt;
  double neg_m_phi;
  double sw_m_phi;
  double neg_traced;
  double sw_traced;
  double sn_traced;
};

// d = 16, m = 1e-10.
inline constexpr std::array<Table2Row, 11> kTable2{{
    {0, 1.419, 1.419, 1.383, 1.295, 1.383},
    {1, 5.287e-1, 5.287e-1, 4.933e-1, 4.100e-1, 4.933e-1},
    {2, 3.541e-1, 3.541e-1, 2.752e-1, 2.171e-1, 2.752e-1},
    {3, 2.695e-1, 2.695e-1, 1.820e-1, 1.075e-1, 1.820e-1},
    {4, 2.175e-1, 2.175e-1, 1.297e-1, 3.137e-2, 1.297e-1},
    {5, 1.818e-1, 1.818e-1, 9.736e-2, 0, 9.736e-2},
    {6, 1.556e-1, 1.556e-1, 7.598e-2, 0, 7.598e-2},
    {7, 1.354e-1, 1.354e-1, 6.101e-2, 0, 6.101e-2},
    {8, 1.194e-1, 1.194e-1, 4.999e-2, 0, 4.999e-2},
    {9, 1.064e-1, 1.064e-1, 4.157e-2, 0, 4.157e-2},
    {10, 9.556e-2, 9.556e-2, 3.493e-2, 0, 3.493e-2},
}};

struct WavefunctionRow {
  bool traced;
  long rt;
  std::array<double, 16> left;
};

// d = 16, m = 1e-10; measured-phi rows first, then traced.
inline constexpr std::array<WavefunctionRow, 10> kTable3{{
    {false, 0, {0.034, 0.052, 0.067, 0.081, 0.093, 0.106, 0.119, 0.133, 0.147, 0.162, 0.179, 0.199, 0.222, 0.250, 0.287, 0.346}},
    {false, 5, {0.059, 0.089, 0.112, 0.131, 0.149, 0.164, 0.178, 0.191, 0.202, 0.212, 0.219, 0.224, 0.223, 0.216, 0.197, 0.150}},
    {false, 50, {0.081, 0.119, 0.146, 0.166, 0.182, 0.194, 0.204, 0.210, 0.213, 0.213, 0.210, 0.203, 0.191, 0.173, 0.146, 0.102}},
    {false, 150, {0.087, 0.127, 0.154, 0.174, 0.189, 0.200, 0.207, 0.212, 0.213, 0.211, 0.206, 0.197, 0.183, 0.164, 0.137, 0.095}},
    {false, 300, {0.089, 0.129, 0.156, 0.176, 0.191, 0.201, 0.208, 0.212, 0.213, 0.210, 0.204, 0.195, 0.181, 0.162, 0.134, 0.093}},
    {true, 0, {0.028, 0.047, 0.062, 0.077, 0.090, 0.103, 0.117, 0.131, 0.146, 0.161, 0.179, 0.199, 0.222, 0.251, 0.290, 0.350}},
    {true, 5, {-0.028, 0.021, 0.061, 0.096, 0.127, 0.155, 0.180, 0.203, 0.222, 0.237, 0.248, 0.251, 0.245, 0.223, 0.172, 0.056}},
    {true, 50, {0.021, -0.022, -0.159, -0.179, -0.109, 0.007, 0.131, 0.237, 0.302, 0.313, 0.261, 0.149, -0.008, -0.165, -0.219, 0.039}},
    {true, 150, {-0.000, 0.020, -0.135, 0.259, 0.002, -0.268, -0.134, 0.188, 0.278, 0.008, -0.287, -0.130, 0.311, -0.126, 0.015, -0.000}},
    {true, 300, {2.278e-7, -0.000, 0.000, -0.007, 0.037, -0.123, 0.266, -0.392, 0.399, -0.282, 0.135, -0.043, 0.008, -0.000, 0.000, -3.040e-7}},
}};

// d = 16, m = 0.3; measured-phi rows first, then traced.
inline constexpr std::array<WavefunctionRow, 10> kTable4{{
    {false, 0, {0.001, 0.002, 0.004, 0.005, 0.008, 0.011, 0.015, 0.022, 0.031, 0.044, 0.063, 0.092, 0.137, 0.208, 0.327, 0.561}},
    {false, 5, {0.004, 0.007, 0.011, 0.015, 0.021, 0.029, 0.039, 0.054, 0.073, 0.099, 0.134, 0.179, 0.236, 0.304, 0.369, 0.380}},
    {false, 20, {0.007, 0.011, 0.017, 0.023, 0.031, 0.042, 0.056, 0.074, 0.097, 0.126, 0.163, 0.207, 0.258, 0.311, 0.349, 0.328}},
    {false, 40, {0.008, 0.013, 0.019, 0.026, 0.035, 0.047, 0.062, 0.081, 0.105, 0.134, 0.171, 0.214, 0.262, 0.310, 0.342, 0.315}},
    {false, 70, {0.009, 0.014, 0.021, 0.028, 0.038, 0.050, 0.065, 0.085, 0.109, 0.139, 0.175, 0.217, 0.264, 0.309, 0.338, 0.308}},
    {true, 0, {0.001, 0.002, 0.004, 0.005, 0.008, 0.011, 0.015, 0.022, 0.031, 0.044, 0.063, 0.092, 0.137, 0.208, 0.327, 0.561}},
    {true, 5, {-0.005, 0.002, 0.011, 0.022, 0.034, 0.049, 0.068, 0.093, 0.124, 0.164, 0.212, 0.268, 0.323, 0.355, 0.297, -0.066}},
    {true, 20, {-0.002, 0.053, -0.095, -0.114, -0.049, 0.051, 0.159, 0.256, 0.324, 0.343, 0.292, 0.152, -0.058, -0.211, 0.029, 0.002}},
    {true, 40, {-0.000, 0.008, -0.074, 0.200, -0.057, -0.248, -0.095, 0.205, 0.312, 0.073, -0.279, -0.228, 0.311, -0.097, 0.009, -0.000}},
    {true, 70, {1.054e-7, -0.000, 0.000, -0.006, 0.033, -0.119, 0.269, -0.402, 0.403, -0.270, 0.119, -0.034, 0.006, -0.000, 0.000, -1.070e-7}},
}};

}  // namespace vacent::reference
