/* golden_fram: data placement pragmas */

#pragma DATA_SECTION ( counter, .Localvars)
#pragma DATA_SECTION ( main, .Localvars)
#pragma DATA_SECTION ( func_1, .Localvars)
