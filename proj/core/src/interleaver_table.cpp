// Generated by tools/gen_tables.cpp. Do not edit.

#include "deepsc/turbo.hpp"

namespace deepsc::classic {

namespace {
constexpr std::uint32_t kInterleaver512[512] = {
    427, 340, 412, 475, 464, 380, 490, 440, 345, 91, 43, 156,
    363, 283, 267, 418, 191, 421, 246, 135, 406, 498, 331, 420,
    134, 106, 326, 20, 402, 404, 249, 478, 333, 31, 227, 71,
    168, 495, 2, 129, 93, 502, 328, 143, 34, 484, 41, 85,
    285, 376, 63, 329, 222, 72, 378, 488, 271, 339, 307, 29,
    405, 115, 215, 78, 64, 313, 320, 455, 428, 468, 173, 311,
    51, 1, 140, 255, 233, 178, 142, 290, 274, 136, 77, 245,
    141, 330, 123, 477, 504, 297, 485, 398, 487, 137, 377, 359,
    237, 204, 356, 379, 261, 511, 171, 432, 231, 503, 473, 447,
    8, 315, 321, 197, 104, 131, 127, 109, 114, 229, 465, 252,
    384, 399, 126, 194, 155, 260, 266, 33, 190, 87, 441, 317,
    253, 393, 211, 130, 98, 362, 294, 352, 319, 74, 309, 105,
    433, 269, 350, 357, 200, 193, 461, 486, 480, 381, 202, 42,
    223, 431, 59, 355, 201, 97, 206, 218, 471, 453, 316, 348,
    272, 364, 411, 505, 360, 407, 102, 6, 133, 353, 180, 414,
    493, 25, 179, 419, 9, 456, 342, 288, 103, 150, 434, 38,
    21, 302, 107, 89, 300, 177, 46, 95, 354, 460, 341, 299,
    323, 469, 182, 281, 60, 449, 347, 268, 425, 68, 152, 270,
    479, 482, 289, 35, 76, 220, 385, 18, 292, 17, 408, 196,
    48, 79, 335, 312, 338, 138, 86, 66, 210, 12, 19, 226,
    472, 446, 186, 470, 118, 58, 318, 214, 500, 170, 236, 501,
    305, 230, 243, 145, 291, 308, 47, 188, 346, 508, 367, 32,
    273, 489, 111, 108, 429, 481, 183, 370, 159, 392, 57, 176,
    373, 99, 125, 382, 476, 375, 383, 13, 88, 122, 256, 444,
    205, 219, 358, 11, 49, 403, 492, 509, 3, 199, 413, 242,
    499, 445, 369, 121, 244, 54, 162, 436, 158, 24, 314, 400,
    65, 474, 259, 175, 394, 459, 365, 232, 467, 277, 276, 452,
    248, 443, 27, 169, 454, 451, 56, 371, 113, 209, 144, 439,
    466, 101, 279, 241, 450, 216, 327, 390, 257, 391, 409, 5,
    149, 221, 37, 112, 494, 438, 344, 28, 284, 430, 278, 301,
    44, 189, 282, 442, 395, 70, 397, 26, 203, 30, 401, 386,
    506, 164, 448, 62, 254, 247, 239, 251, 426, 192, 240, 198,
    410, 181, 437, 195, 349, 23, 161, 61, 50, 262, 496, 303,
    94, 154, 389, 212, 374, 351, 217, 250, 424, 119, 298, 275,
    116, 213, 396, 304, 151, 387, 507, 510, 491, 366, 325, 334,
    40, 83, 167, 295, 52, 343, 82, 22, 4, 415, 92, 463,
    388, 483, 462, 166, 148, 280, 15, 90, 258, 110, 165, 423,
    208, 286, 293, 124, 187, 16, 372, 310, 36, 228, 80, 306,
    172, 184, 84, 336, 117, 69, 324, 0, 416, 146, 225, 45,
    457, 100, 361, 7, 458, 238, 422, 139, 53, 39, 10, 153,
    234, 96, 235, 55, 157, 497, 417, 160, 368, 185, 174, 332,
    75, 207, 163, 264, 263, 81, 73, 224, 322, 435, 265, 14,
    337, 128, 120, 67, 147, 296, 287, 132
};
}  // namespace

std::span<const std::uint32_t> standard_interleaver() { return kInterleaver512; }

}  // namespace deepsc::classic
