// print the answer
std::cout << "hello" << std::endl;
/* and read one value */
std::cin >> x;
