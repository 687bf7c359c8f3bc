#include <pathopt/cli.hpp>

#include <iostream>

int main( int argc, char** argv )
{
  return pathopt::run( argc, argv, std::cout, std::cerr );
}
