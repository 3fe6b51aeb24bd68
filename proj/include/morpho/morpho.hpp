#pragma once

#include "attributes.hpp"
#include "component_tree.hpp"
#include "filter.hpp"
#include "graph.hpp"
#include "image.hpp"
#include "pnm.hpp"
#include "shape_space.hpp"
#include "tree_of_shapes.hpp"
